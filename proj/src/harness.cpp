namespace isac {}
