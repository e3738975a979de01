// Scratch smoke test for the conic backend (not part of the suite).
#include <cstdio>
#include <iostream>

#include "isac/conic.hpp"

using namespace isac::conic;

int main() {
  int fails = 0;
  auto check = [&](bool ok, const char* name) {
    std::printf("%s %s\n", ok ? "[ok]  " : "[FAIL]", name);
    if (!ok) ++fails;
  };

  {
    // min t s.t. [[1,1],[1,t]] >= 0  ->  t = 1
    ConicProblem p;
    const int t = p.add_scalar("t");
    LinearExpr obj;
    obj.add_scalar(t, 1.0);
    p.set_objective(obj);
    Lmi l;
    l.side = 2;
    l.constant = Eigen::MatrixXcd::Zero(2, 2);
    l.constant(0, 0) = 1.0;
    l.constant(0, 1) = 1.0;
    l.constant(1, 0) = 1.0;
    Eigen::MatrixXcd tc = Eigen::MatrixXcd::Zero(2, 2);
    tc(1, 1) = 1.0;
    l.scalar_terms[t] = tc;
    l.tag = "schur";
    p.add_lmi(l);
    // keep t bounded below to pin the cone
    LinearExpr ge;
    ge.add_scalar(t, 1.0);
    p.add_linear(ge, Relation::kGe, "t_nonneg");
    ConicSolution s = solve(p);
    std::printf("  status=%s obj=%.10f iters=%d\n", to_string(s.status).c_str(),
                s.objective, s.iterations); std::printf("  msg=%s\n", s.message.c_str());
    check(s.status == SolveStatus::kOptimal && std::abs(s.objective - 1.0) < 1e-6,
          "2x2 schur t=1");
  }

  {
    // infeasible toy: x >= 1, x <= 0
    ConicProblem p;
    const int x = p.add_scalar("x");
    LinearExpr obj;
    obj.add_scalar(x, 1.0);
    p.set_objective(obj);
    LinearExpr ge;  // x - 1 >= 0
    ge.add_scalar(x, 1.0);
    ge.constant = -1.0;
    p.add_linear(ge, Relation::kGe, "lo");
    LinearExpr le;  // x <= 0
    le.add_scalar(x, 1.0);
    p.add_linear(le, Relation::kLe, "hi");
    ConicSolution s = solve(p);
    std::printf("  status=%s iters=%d msg=%s\n", to_string(s.status).c_str(),
                s.iterations, s.message.c_str());
    check(s.status == SolveStatus::kInfeasible, "infeasible toy");
  }

  {
    // LP: min x+y s.t. x >= 1, y >= 2
    ConicProblem p;
    const int x = p.add_scalar("x");
    const int y = p.add_scalar("y");
    LinearExpr obj;
    obj.add_scalar(x, 1.0);
    obj.add_scalar(y, 1.0);
    p.set_objective(obj);
    LinearExpr c1;
    c1.add_scalar(x, 1.0);
    c1.constant = -1.0;
    p.add_linear(c1, Relation::kGe, "x");
    LinearExpr c2;
    c2.add_scalar(y, 1.0);
    c2.constant = -2.0;
    p.add_linear(c2, Relation::kGe, "y");
    ConicSolution s = solve(p);
    std::printf("  status=%s obj=%.10f iters=%d\n", to_string(s.status).c_str(),
                s.objective, s.iterations); std::printf("  msg=%s\n", s.message.c_str());
    check(s.status == SolveStatus::kOptimal && std::abs(s.objective - 3.0) < 1e-7, "lp");
  }

  {
    // Hermitian PSD variable: min Tr{X} s.t. X >= C (i.e. X - C PSD),
    // optimum = sum of positive eigenvalues of C.
    ConicProblem p;
    const int xv = p.add_psd("X", 3);
    Eigen::MatrixXcd c(3, 3);
    c.setZero();
    c(0, 0) = 1.0;
    c(1, 1) = -2.0;
    c(0, 1) = std::complex<double>(0.5, 0.25);
    c(1, 0) = std::conj(c(0, 1));
    c(2, 2) = 0.5;
    c(1, 2) = std::complex<double>(0.0, -1.0);
    c(2, 1) = std::conj(c(1, 2));
    LinearExpr obj;
    obj.add_psd_trace(xv, Eigen::MatrixXcd::Identity(3, 3));
    p.set_objective(obj);
    Lmi l;
    l.side = 3;
    l.constant = -c;
    for (int r = 0; r < 3; ++r)
      for (int cc2 = r; cc2 < 3; ++cc2) {
        TraceTerm t;
        t.var = xv;
        t.row = r;
        t.col = cc2;
        Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(3, 3);
        g(r, cc2) = 1.0;  // M_rc += Tr{g^H X} = X_rc
        t.g = g;
        l.trace_terms.push_back(t);
      }
    l.tag = "xgec";
    p.add_lmi(l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(c);
    double expect = 0.0;
    for (int i = 0; i < 3; ++i) expect += std::max(0.0, eig.eigenvalues()(i));
    ConicSolution s = solve(p);
    std::printf("  status=%s obj=%.10f expect=%.10f iters=%d\n",
                to_string(s.status).c_str(), s.objective, expect, s.iterations);
    check(s.status == SolveStatus::kOptimal && std::abs(s.objective - expect) < 1e-6,
          "complex psd projection");
  }

  {
    // equality handling: min x s.t. x + y = 3, y <= 1, x >= 0 -> x = 2
    ConicProblem p;
    const int x = p.add_scalar("x");
    const int y = p.add_scalar("y");
    LinearExpr obj;
    obj.add_scalar(x, 1.0);
    p.set_objective(obj);
    LinearExpr eq;
    eq.add_scalar(x, 1.0);
    eq.add_scalar(y, 1.0);
    eq.constant = -3.0;
    p.add_linear(eq, Relation::kEq, "sum");
    LinearExpr le;
    le.add_scalar(y, 1.0);
    le.constant = -1.0;
    p.add_linear(le, Relation::kLe, "ycap");
    LinearExpr ge;
    ge.add_scalar(x, 1.0);
    p.add_linear(ge, Relation::kGe, "xpos");
    ConicSolution s = solve(p);
    std::printf("  status=%s obj=%.10f iters=%d\n", to_string(s.status).c_str(),
                s.objective, s.iterations); std::printf("  msg=%s\n", s.message.c_str());
    check(s.status == SolveStatus::kOptimal && std::abs(s.objective - 2.0) < 1e-7,
          "equality lp");
  }

  {
    // fixed random PSD Jt: min sum t_a with the epigraph LMIs == Tr{Jt^{-1}}
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(6, 6);
    Eigen::MatrixXd jt = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(6, 6);
    ConicProblem p;
    std::array<int, 6> tv{};
    LinearExpr obj;
    for (int i = 0; i < 6; ++i) {
      tv[i] = p.add_scalar("t" + std::to_string(i + 1));
      obj.add_scalar(tv[i], 1.0);
    }
    p.set_objective(obj);
    SymExpr6 fim;
    for (int r = 0; r < 6; ++r)
      for (int c = r; c < 6; ++c) fim.entry[r][c].constant = jt(r, c);
    for (auto& l : build_peb_epigraph_lmis(fim, tv, "peb")) p.add_lmi(std::move(l));
    ConicSolution s = solve(p);
    const double expect = jt.inverse().trace();
    std::printf("  status=%s obj=%.10f expect=%.10f iters=%d\n",
                to_string(s.status).c_str(), s.objective, expect, s.iterations);
    check(s.status == SolveStatus::kOptimal &&
              std::abs(s.objective - expect) < 1e-6 * expect,
          "schur epigraph == trace inverse");
  }

  std::printf("%s\n", fails == 0 ? "ALL OK" : "FAILURES");
  return fails == 0 ? 0 : 1;
}
