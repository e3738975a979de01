// Scratch stress battery for the conic backend (not part of the suite).
#include <cstdio>
#include <random>

#include "isac/conic.hpp"

using namespace isac::conic;

int main() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int fails = 0;

  // 1) random fixed PSD Jt epigraph at several magnitudes
  for (int trial = 0; trial < 30; ++trial) {
    const double scale = std::pow(10.0, (trial % 5) - 2);  // 1e-2 .. 1e2
    Eigen::MatrixXd a(6, 6);
    for (int i = 0; i < 36; ++i) a(i / 6, i % 6) = gauss(rng);
    Eigen::MatrixXd jt = scale * (a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(6, 6));
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
    const double rel = std::abs(s.objective - expect) / std::max(1.0, expect);
    const bool usable = s.status == SolveStatus::kOptimal ||
                       s.status == SolveStatus::kInaccurate;
    if (!usable || rel > 1e-6) {
      std::printf("[FAIL] epigraph trial %d scale=%g status=%s rel=%.2e iters=%d\n",
                  trial, scale, to_string(s.status).c_str(), rel, s.iterations);
      ++fails;
    }
  }
  std::printf("epigraph battery done\n");

  // 2) OP2-like structure: complex PSD F (n=8), power cap, a linear row, and
  //    six 7x7 LMIs whose 6x6 block is an affine map of F with tiny entries.
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 8;
    ConicProblem p;
    const int fv = p.add_psd("F", n);
    std::array<int, 6> tv{};
    LinearExpr obj;
    for (int i = 0; i < 6; ++i) {
      tv[i] = p.add_scalar("t" + std::to_string(i + 1));
      obj.add_scalar(tv[i], 1.0);
    }
    p.set_objective(obj);

    // random Hermitian coefficient matrices for the FIM entries
    SymExpr6 fim;
    std::vector<Eigen::MatrixXcd> coeffs;
    for (int r = 0; r < 6; ++r)
      for (int c = r; c < 6; ++c) {
        Eigen::MatrixXcd g(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) g(i, j) = {gauss(rng), gauss(rng)};
        g = (0.5 * (g + g.adjoint())).eval();
        if (r == c) g += 2.5 * n * Eigen::MatrixXcd::Identity(n, n);  // diag dominance
        fim.entry[r][c].add_psd_trace(fv, g);
        coeffs.push_back(g);
      }
    for (auto& l : build_peb_epigraph_lmis(fim, tv, "peb")) p.add_lmi(std::move(l));
    LinearExpr pw;  // Tr{F} <= 0.1
    pw.add_psd_trace(fv, Eigen::MatrixXcd::Identity(n, n));
    pw.constant = -0.1;
    p.add_linear(pw, Relation::kLe, "power");
    ConicSolution s = solve(p);
    bool ok = s.status == SolveStatus::kOptimal || s.status == SolveStatus::kInaccurate;
    if (ok) {
      // check the reported objective equals sum of diag of inverse of J(F*)
      const Eigen::MatrixXcd f = s.psd.at("F");
      Eigen::MatrixXd jt(6, 6);
      int k = 0;
      for (int r = 0; r < 6; ++r)
        for (int c = r; c < 6; ++c) {
          jt(r, c) = (coeffs[k] * f).trace().real();
          jt(c, r) = jt(r, c);
          ++k;
        }
      const double tr = jt.inverse().trace();
      ok = std::abs(s.objective - tr) < 1e-5 * std::abs(tr);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(f);
      ok = ok && eig.eigenvalues()(0) > -1e-8 && f.trace().real() <= 0.1 + 1e-7;
      if (!ok)
        std::printf("[FAIL] op2-like %d: obj=%.8e trJinv=%.8e minEig=%.2e trF=%.8f\n",
                    trial, s.objective, tr, eig.eigenvalues()(0), f.trace().real());
    } else {
      std::printf("[FAIL] op2-like %d status=%s msg=%s\n", trial,
                  to_string(s.status).c_str(), s.message.c_str());
    }
    if (!ok) ++fails;
  }
  std::printf("op2-like battery done\n");

  // 3) diag(W)=1 equality + PSD var blocks (OP3-like): maximize a trace-like
  //    objective subject to elliptope membership; sanity only.
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 4;
    ConicProblem p;
    const int wv = p.add_psd("W1", n);
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = {gauss(rng), gauss(rng)};
    g = (0.5 * (g + g.adjoint())).eval();
    LinearExpr obj;
    obj.add_psd_trace(wv, -g);  // maximize Re Tr{g W}
    p.set_objective(obj);
    for (int i = 0; i < n; ++i) {
      LinearExpr diag;
      Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
      e(i, i) = 1.0;
      diag.add_psd_trace(wv, e);
      diag.constant = -1.0;
      p.add_linear(diag, Relation::kEq, "diag" + std::to_string(i));
    }
    ConicSolution s = solve(p);
    bool ok = s.status == SolveStatus::kOptimal;
    if (ok) {
      const Eigen::MatrixXcd w = s.psd.at("W1");
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(w);
      for (int i = 0; i < n; ++i) ok = ok && std::abs(w(i, i).real() - 1.0) < 1e-6;
      ok = ok && eig.eigenvalues()(0) > -1e-7;
    }
    if (!ok) {
      std::printf("[FAIL] elliptope %d status=%s\n", trial, to_string(s.status).c_str());
      ++fails;
    }
  }
  std::printf("elliptope battery done\n");

  std::printf("%s (fails=%d)\n", fails == 0 ? "ALL OK" : "FAILURES", fails);
  return fails == 0 ? 0 : 1;
}
