// Scratch repro for one failing epigraph instance (not part of the suite).
#include <cstdio>
#include <random>

#include "isac/conic.hpp"

using namespace isac::conic;

int main(int argc, char** argv) {
  const int target = argc > 1 ? std::atoi(argv[1]) : 9;
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial <= target; ++trial) {
    const double scale = std::pow(10.0, (trial % 6) * 4 - 12);
    Eigen::MatrixXd a(6, 6);
    for (int i = 0; i < 36; ++i) a(i / 6, i % 6) = gauss(rng);
    Eigen::MatrixXd jt = scale * (a * a.transpose() + 0.3 * Eigen::MatrixXd::Identity(6, 6));
    if (trial != target) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ev(jt);
    std::printf("scale=%g eigs: %.3e .. %.3e  trJinv=%.6e\n", scale,
                ev.eigenvalues()(0), ev.eigenvalues()(5), jt.inverse().trace());
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
    std::printf("status=%s obj=%.10e iters=%d msg=%s\n", to_string(s.status).c_str(),
                s.objective, s.iterations, s.message.c_str());
  }
  return 0;
}
