#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "isac/conic.hpp"

// Dense homogeneous self-dual embedding with Nesterov-Todd scaling and a
// Mehrotra predictor-corrector, over products of nonnegative and PSD cones.
// Complex Hermitian variables and LMIs enter through the standard real
// symmetric embedding [[Re, -Im], [Im, Re]].

namespace isac::conic {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

int svec_dim(int m) { return m * (m + 1) / 2; }

// Lower triangle, column-major; requires r >= c.
int svec_index(int r, int c, int m) { return c * m - c * (c - 1) / 2 + (r - c); }

Eigen::VectorXd svec(const Eigen::MatrixXd& s) {
  const int m = static_cast<int>(s.rows());
  Eigen::VectorXd v(svec_dim(m));
  int k = 0;
  for (int c = 0; c < m; ++c) {
    v(k++) = s(c, c);
    for (int r = c + 1; r < m; ++r) v(k++) = kSqrt2 * s(r, c);
  }
  return v;
}

void smat_into(const Eigen::VectorXd& v, int m, Eigen::MatrixXd& s) {
  s.resize(m, m);
  int k = 0;
  for (int c = 0; c < m; ++c) {
    s(c, c) = v(k++);
    for (int r = c + 1; r < m; ++r) {
      const double x = v(k++) / kSqrt2;
      s(r, c) = x;
      s(c, r) = x;
    }
  }
}

// ---------------------------------------------------------------------------
// compiled standard form:  min c'x  s.t.  A x = b,  s = h - G x in K
// with K = R_+^l x S_+^{m_1} x ... (svec coordinates per PSD block).

struct Row {
  std::vector<std::pair<int, double>> g;
  double h = 0.0;
};

struct Block {
  int side = 0;
  std::vector<int> params;   // x indices with nonzero columns
  Eigen::MatrixXd g_cols;    // svec_dim x params.size()
  Eigen::VectorXd h_vec;     // svec_dim
};

struct Compiled {
  int n = 0;
  Eigen::VectorXd c;
  double offset = 0.0;
  Eigen::MatrixXd a_eq;  // p x n
  Eigen::VectorXd b_eq;
  std::vector<Row> nonneg;
  std::vector<Block> blocks;
  int nn_count = 0;
  int cone_dim = 0;  // nn_count + sum of svec dims
  int degree = 0;    // nn_count + sum of sides
  std::vector<int> block_offset;
  int n_scalars = 0;
  std::vector<int> psd_offset;  // x offset of each psd var's parameters
};

// Hermitian parametrization of a complex side-n PSD variable: n diagonal
// parameters then (re, im) pairs for the lower triangle, column-major.
struct PsdParam {
  int i = 0, j = 0;
  enum Kind { kDiag, kRe, kIm } kind = kDiag;
};

std::vector<PsdParam> psd_params(int n) {
  std::vector<PsdParam> out;
  out.reserve(n * n);
  for (int i = 0; i < n; ++i) out.push_back({i, i, PsdParam::kDiag});
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      out.push_back({i, j, PsdParam::kRe});
      out.push_back({i, j, PsdParam::kIm});
    }
  return out;
}

// Re Tr{C^H B_p} for the basis element of one parameter.
double real_trace_coeff(const Eigen::MatrixXcd& c, const PsdParam& p) {
  switch (p.kind) {
    case PsdParam::kDiag: return c(p.i, p.i).real();
    case PsdParam::kRe: return c(p.i, p.j).real() + c(p.j, p.i).real();
    case PsdParam::kIm: return c(p.i, p.j).imag() - c(p.j, p.i).imag();
  }
  return 0.0;
}

// Tr{g^H B_p} (complex in general).
std::complex<double> trace_coeff(const Eigen::MatrixXcd& g, const PsdParam& p) {
  switch (p.kind) {
    case PsdParam::kDiag: return std::conj(g(p.i, p.i));
    case PsdParam::kRe: return std::conj(g(p.i, p.j)) + std::conj(g(p.j, p.i));
    case PsdParam::kIm:
      return std::complex<double>(0, 1) * (std::conj(g(p.i, p.j)) - std::conj(g(p.j, p.i)));
  }
  return {};
}

bool nearly_hermitian(const Eigen::MatrixXcd& g) {
  return (g - g.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * (1.0 + g.cwiseAbs().maxCoeff());
}

bool nearly_real(const Eigen::MatrixXcd& m) {
  return m.imag().cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + m.cwiseAbs().maxCoeff());
}

// Adds a Hermitian-pair entry M(row,col) += v (and its mirror) to an svec'd
// column of a real (embed=false) or embedded (embed=true) LMI of side m.
void add_entry(double* col, int m, bool embed, int row, int col_idx,
               std::complex<double> v) {
  int a = row, b = col_idx;
  std::complex<double> val = v;
  if (a < b) {
    std::swap(a, b);
    val = std::conj(val);
  }
  if (!embed) {
    if (a == b)
      col[svec_index(a, a, m)] += val.real();
    else
      col[svec_index(a, b, m)] += kSqrt2 * val.real();
    return;
  }
  const int n = m;           // original side
  const int em = 2 * m;      // embedded side
  if (a == b) {
    col[svec_index(a, a, em)] += val.real();
    col[svec_index(n + a, n + a, em)] += val.real();
    return;
  }
  col[svec_index(a, b, em)] += kSqrt2 * val.real();
  col[svec_index(n + a, n + b, em)] += kSqrt2 * val.real();
  col[svec_index(n + b, a, em)] -= kSqrt2 * val.imag();
  col[svec_index(n + a, b, em)] += kSqrt2 * val.imag();
}

Compiled compile(const ConicProblem& p) {
  Compiled cp;
  cp.n_scalars = p.n_scalars();
  cp.psd_offset.resize(p.n_psd());
  int n = cp.n_scalars;
  for (int v = 0; v < p.n_psd(); ++v) {
    cp.psd_offset[v] = n;
    n += p.psd_side(v) * p.psd_side(v);
  }
  cp.n = n;

  // objective
  cp.c = Eigen::VectorXd::Zero(n);
  cp.offset = p.objective().constant;
  for (const auto& [v, coeff] : p.objective().scalar_coeffs) cp.c(v) = coeff;
  for (const auto& [v, cmat] : p.objective().psd_coeffs) {
    const auto params = psd_params(p.psd_side(v));
    for (size_t k = 0; k < params.size(); ++k)
      cp.c(cp.psd_offset[v] + static_cast<int>(k)) += real_trace_coeff(cmat, params[k]);
  }

  // linear rows
  std::vector<Eigen::VectorXd> eq_rows;
  std::vector<double> eq_rhs;
  for (const auto& lc : p.linear()) {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
    for (const auto& [v, coeff] : lc.expr.scalar_coeffs) row(v) = coeff;
    for (const auto& [v, cmat] : lc.expr.psd_coeffs) {
      const auto params = psd_params(p.psd_side(v));
      for (size_t k = 0; k < params.size(); ++k)
        row(cp.psd_offset[v] + static_cast<int>(k)) += real_trace_coeff(cmat, params[k]);
    }
    const double cst = lc.expr.constant;
    const double scale = std::max(row.cwiseAbs().maxCoeff(), 1e-300);
    if (lc.rel == Relation::kEq) {
      eq_rows.push_back(row / scale);
      eq_rhs.push_back(-cst / scale);
      continue;
    }
    // Ge: s = cst + row'x >= 0  ->  h = cst, G = -row
    // Le: s = -cst - row'x >= 0 ->  h = -cst, G = row
    Row r;
    const double sgn = lc.rel == Relation::kGe ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j)
      if (row(j) != 0.0) r.g.emplace_back(j, sgn * row(j) / scale);
    r.h = (lc.rel == Relation::kGe ? cst : -cst) / scale;
    cp.nonneg.push_back(std::move(r));
  }
  cp.a_eq.resize(static_cast<int>(eq_rows.size()), n);
  cp.b_eq.resize(static_cast<int>(eq_rows.size()));
  for (size_t i = 0; i < eq_rows.size(); ++i) {
    cp.a_eq.row(static_cast<int>(i)) = eq_rows[i].transpose();
    cp.b_eq(static_cast<int>(i)) = eq_rhs[i];
  }

  // PSD-variable cones
  for (int v = 0; v < p.n_psd(); ++v) {
    const int side = p.psd_side(v);
    const int em = 2 * side;
    const auto params = psd_params(side);
    Block b;
    b.side = em;
    b.h_vec = Eigen::VectorXd::Zero(svec_dim(em));
    b.params.resize(params.size());
    b.g_cols = Eigen::MatrixXd::Zero(svec_dim(em), static_cast<int>(params.size()));
    for (size_t k = 0; k < params.size(); ++k) {
      b.params[k] = cp.psd_offset[v] + static_cast<int>(k);
      double* col = b.g_cols.col(static_cast<int>(k)).data();
      const auto& pr = params[k];
      // s = h - Gx must equal svec(emb(X)); columns of G are -svec(emb(B_p)).
      switch (pr.kind) {
        case PsdParam::kDiag:
          col[svec_index(pr.i, pr.i, em)] -= 1.0;
          col[svec_index(side + pr.i, side + pr.i, em)] -= 1.0;
          break;
        case PsdParam::kRe:
          col[svec_index(pr.i, pr.j, em)] -= kSqrt2;
          col[svec_index(side + pr.i, side + pr.j, em)] -= kSqrt2;
          break;
        case PsdParam::kIm:
          col[svec_index(side + pr.j, pr.i, em)] -= -kSqrt2;
          col[svec_index(side + pr.i, pr.j, em)] -= kSqrt2;
          break;
      }
    }
    cp.blocks.push_back(std::move(b));
  }

  // LMIs
  for (const auto& lmi : p.lmis()) {
    bool real = nearly_real(lmi.constant);
    for (const auto& [v, m] : lmi.scalar_terms) real = real && nearly_real(m);
    for (const auto& t : lmi.trace_terms) real = real && nearly_hermitian(t.g);

    const int m = lmi.side;
    const int em = real ? m : 2 * m;
    const int sd = svec_dim(em);

    std::vector<int> involved;
    for (const auto& [v, mat] : lmi.scalar_terms) involved.push_back(v);
    std::vector<int> psd_vars_in;
    for (const auto& t : lmi.trace_terms)
      if (std::find(psd_vars_in.begin(), psd_vars_in.end(), t.var) == psd_vars_in.end())
        psd_vars_in.push_back(t.var);
    std::sort(psd_vars_in.begin(), psd_vars_in.end());
    std::vector<std::vector<PsdParam>> var_params;
    for (int v : psd_vars_in) {
      const auto params = psd_params(p.psd_side(v));
      for (size_t k = 0; k < params.size(); ++k)
        involved.push_back(cp.psd_offset[v] + static_cast<int>(k));
      var_params.push_back(params);
    }
    std::sort(involved.begin(), involved.end());
    involved.erase(std::unique(involved.begin(), involved.end()), involved.end());
    std::vector<int> pos_of(n, -1);
    for (size_t k = 0; k < involved.size(); ++k) pos_of[involved[k]] = static_cast<int>(k);

    Block b;
    b.side = em;
    b.params = involved;
    b.g_cols = Eigen::MatrixXd::Zero(sd, static_cast<int>(involved.size()));
    b.h_vec = Eigen::VectorXd::Zero(sd);

    // constant -> h
    for (int cc = 0; cc < m; ++cc)
      for (int rr = cc; rr < m; ++rr)
        if (lmi.constant(rr, cc) != 0.0)
          add_entry(b.h_vec.data(), m, !real, rr, cc, lmi.constant(rr, cc));

    // scalar terms
    for (const auto& [v, mat] : lmi.scalar_terms) {
      double* col = b.g_cols.col(pos_of[v]).data();
      for (int cc = 0; cc < m; ++cc)
        for (int rr = cc; rr < m; ++rr)
          if (mat(rr, cc) != 0.0) add_entry(col, m, !real, rr, cc, -mat(rr, cc));
    }

    // psd trace terms
    for (const auto& t : lmi.trace_terms) {
      const int vi =
          static_cast<int>(std::find(psd_vars_in.begin(), psd_vars_in.end(), t.var) -
                           psd_vars_in.begin());
      const auto& params = var_params[vi];
      const int off = cp.psd_offset[t.var];
      for (size_t k = 0; k < params.size(); ++k) {
        const std::complex<double> v = trace_coeff(t.g, params[k]);
        if (v == std::complex<double>(0.0, 0.0)) continue;
        double* col = b.g_cols.col(pos_of[off + static_cast<int>(k)]).data();
        add_entry(col, m, !real, t.row, t.col, -v);
      }
    }

    // uniform block scaling keeps entries O(1)
    const double scale =
        std::max(b.h_vec.cwiseAbs().maxCoeff(),
                 b.g_cols.size() > 0 ? b.g_cols.cwiseAbs().maxCoeff() : 0.0);
    if (scale > 0.0) {
      b.h_vec /= scale;
      b.g_cols /= scale;
    }
    cp.blocks.push_back(std::move(b));
  }

  cp.nn_count = static_cast<int>(cp.nonneg.size());
  cp.cone_dim = cp.nn_count;
  cp.degree = cp.nn_count;
  cp.block_offset.clear();
  for (const auto& b : cp.blocks) {
    cp.block_offset.push_back(cp.cone_dim);
    cp.cone_dim += svec_dim(b.side);
    cp.degree += b.side;
  }
  return cp;
}

// ---------------------------------------------------------------------------
// cone algebra on flat vectors (nonneg entries first, then svec blocks)

struct Scaling {
  Eigen::VectorXd w_nn;    // sqrt(s/z)
  Eigen::VectorXd lam_nn;  // sqrt(s*z)
  std::vector<Eigen::MatrixXd> r, rinv;
  std::vector<Eigen::VectorXd> lam;
};

struct Work {
  std::vector<Eigen::MatrixXd> m1, m2;  // per-block side x side scratch
};

void apply_G(const Compiled& cp, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
  out.setZero();
  for (int i = 0; i < cp.nn_count; ++i) {
    double acc = 0.0;
    for (const auto& [j, v] : cp.nonneg[i].g) acc += v * x(j);
    out(i) = acc;
  }
  for (size_t bi = 0; bi < cp.blocks.size(); ++bi) {
    const Block& b = cp.blocks[bi];
    Eigen::VectorXd xs(b.params.size());
    for (size_t k = 0; k < b.params.size(); ++k) xs(static_cast<int>(k)) = x(b.params[k]);
    out.segment(cp.block_offset[bi], svec_dim(b.side)).noalias() = b.g_cols * xs;
  }
}

void apply_Gt(const Compiled& cp, const Eigen::VectorXd& u, Eigen::VectorXd& out) {
  out.setZero();
  for (int i = 0; i < cp.nn_count; ++i)
    for (const auto& [j, v] : cp.nonneg[i].g) out(j) += v * u(i);
  for (size_t bi = 0; bi < cp.blocks.size(); ++bi) {
    const Block& b = cp.blocks[bi];
    Eigen::VectorXd us =
        b.g_cols.transpose() * u.segment(cp.block_offset[bi], svec_dim(b.side));
    for (size_t k = 0; k < b.params.size(); ++k) out(b.params[k]) += us(static_cast<int>(k));
  }
}

Eigen::VectorXd cone_h(const Compiled& cp) {
  Eigen::VectorXd h(cp.cone_dim);
  for (int i = 0; i < cp.nn_count; ++i) h(i) = cp.nonneg[i].h;
  for (size_t bi = 0; bi < cp.blocks.size(); ++bi)
    h.segment(cp.block_offset[bi], svec_dim(cp.blocks[bi].side)) = cp.blocks[bi].h_vec;
  return h;
}

// Largest t with  lambda-ish point + (1/t) * dir  on the cone boundary,
// i.e. max(0, -min generalized eigenvalue); step = 1/t.
double max_step_rate(const Compiled& cp, const Eigen::VectorXd& point,
                     const Eigen::VectorXd& dir, Work& work) {
  double t = 0.0;
  for (int i = 0; i < cp.nn_count; ++i)
    if (point(i) > 0.0) t = std::max(t, -dir(i) / point(i));
  for (size_t bi = 0; bi < cp.blocks.size(); ++bi) {
    const Block& b = cp.blocks[bi];
    const int off = cp.block_offset[bi];
    smat_into(dir.segment(off, svec_dim(b.side)), b.side, work.m1[bi]);
    Eigen::VectorXd lam_block(b.side);
    {
      Eigen::MatrixXd pt;
      smat_into(point.segment(off, svec_dim(b.side)), b.side, pt);
      lam_block = pt.diagonal();  // scaled points are diagonal (lambda)
    }
    Eigen::MatrixXd& d = work.m2[bi];
    d = work.m1[bi];
    for (int r = 0; r < b.side; ++r)
      for (int c = 0; c < b.side; ++c)
        d(r, c) /= std::sqrt(lam_block(r)) * std::sqrt(lam_block(c));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d, Eigen::EigenvaluesOnly);
    t = std::max(t, -eig.eigenvalues()(0));
  }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

ConicSolution solve(const ConicProblem& problem, const SolveSettings& settings) {
  const auto t_start = std::chrono::steady_clock::now();
  ConicSolution sol;

  if (const char* prefix = std::getenv("ISAC_CONIC_DUMP")) {
    static int dump_counter = 0;
    std::FILE* fp = std::fopen(
        (std::string(prefix) + "_" + std::to_string(dump_counter++) + ".json").c_str(),
        "w");
    if (fp) {
      const std::string text = serialize(problem);
      std::fwrite(text.data(), 1, text.size(), fp);
      std::fclose(fp);
    }
  }

  Compiled cp = compile(problem);
  const int n = cp.n;
  const int p = static_cast<int>(cp.b_eq.size());
  const int d = cp.cone_dim;
  const int nb = static_cast<int>(cp.blocks.size());

  if (d == 0) {
    sol.status = SolveStatus::kFailed;
    sol.message = "no cone constraints";
    return sol;
  }

  const Eigen::VectorXd h = cone_h(cp);

  if (const char* prefix = std::getenv("ISAC_COMPILED_DUMP")) {
    static int cdump = 0;
    std::FILE* fp = std::fopen(
        (std::string(prefix) + "_" + std::to_string(cdump++) + ".json").c_str(), "w");
    if (fp) {
      auto wvec = [&](const char* name, const Eigen::VectorXd& v, bool last = false) {
        std::fprintf(fp, "\"%s\":[", name);
        for (Eigen::Index i = 0; i < v.size(); ++i)
          std::fprintf(fp, "%.17g%s", v(i), i + 1 < v.size() ? "," : "");
        std::fprintf(fp, "]%s", last ? "" : ",");
      };
      std::fprintf(fp, "{");
      wvec("c", cp.c);
      wvec("h", h);
      wvec("b", cp.b_eq);
      std::fprintf(fp, "\"l\":%d,\"sides\":[", cp.nn_count);
      for (size_t bi = 0; bi < cp.blocks.size(); ++bi)
        std::fprintf(fp, "%d%s", cp.blocks[bi].side,
                     bi + 1 < cp.blocks.size() ? "," : "");
      std::fprintf(fp, "],\"n\":%d,", cp.n);
      std::fprintf(fp, "\"A\":[");
      for (Eigen::Index r = 0; r < cp.a_eq.rows(); ++r)
        for (Eigen::Index cc2 = 0; cc2 < cp.a_eq.cols(); ++cc2)
          std::fprintf(fp, "%.17g%s", cp.a_eq(r, cc2),
                       r + 1 == cp.a_eq.rows() && cc2 + 1 == cp.a_eq.cols() ? "" : ",");
      std::fprintf(fp, "],\"G\":[");
      bool first = true;
      for (int i = 0; i < cp.nn_count; ++i)
        for (const auto& [j, v] : cp.nonneg[i].g) {
          std::fprintf(fp, "%s[%d,%d,%.17g]", first ? "" : ",", i, j, v);
          first = false;
        }
      for (size_t bi = 0; bi < cp.blocks.size(); ++bi) {
        const Block& bk = cp.blocks[bi];
        for (int col = 0; col < static_cast<int>(bk.params.size()); ++col)
          for (int r = 0; r < bk.g_cols.rows(); ++r)
            if (bk.g_cols(r, col) != 0.0) {
              std::fprintf(fp, "%s[%d,%d,%.17g]", first ? "" : ",",
                           cp.block_offset[bi] + r, bk.params[col],
                           bk.g_cols(r, col));
              first = false;
            }
      }
      std::fprintf(fp, "]}");
      std::fclose(fp);
    }
  }

  const double c_norm = std::max(1.0, cp.c.norm());
  const double b_norm = std::max(1.0, cp.b_eq.size() ? cp.b_eq.norm() : 0.0);
  const double h_norm = std::max(1.0, h.norm());

  Work work;
  work.m1.resize(nb);
  work.m2.resize(nb);
  for (int bi = 0; bi < nb; ++bi) {
    work.m1[bi].resize(cp.blocks[bi].side, cp.blocks[bi].side);
    work.m2[bi].resize(cp.blocks[bi].side, cp.blocks[bi].side);
  }

  Scaling sc;
  sc.w_nn.resize(cp.nn_count);
  sc.lam_nn.resize(cp.nn_count);
  sc.r.resize(nb);
  sc.rinv.resize(nb);
  sc.lam.resize(nb);

  // cone-space helpers -----------------------------------------------------
  auto scale_s = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    // W^{-T} v : nonneg v/w ; psd svec(Rinv V Rinv^T)
    for (int i = 0; i < cp.nn_count; ++i) out(i) = v(i) / sc.w_nn(i);
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      smat_into(v.segment(off, svec_dim(m)), m, work.m1[bi]);
      work.m2[bi].noalias() = sc.rinv[bi] * work.m1[bi];
      work.m1[bi].noalias() = work.m2[bi] * sc.rinv[bi].transpose();
      out.segment(off, svec_dim(m)) = svec(work.m1[bi]);
    }
  };
  auto unscale_s = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    // W^{T} v : nonneg w*v ; psd svec(R V R^T)
    for (int i = 0; i < cp.nn_count; ++i) out(i) = v(i) * sc.w_nn(i);
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      smat_into(v.segment(off, svec_dim(m)), m, work.m1[bi]);
      work.m2[bi].noalias() = sc.r[bi] * work.m1[bi];
      work.m1[bi].noalias() = work.m2[bi] * sc.r[bi].transpose();
      out.segment(off, svec_dim(m)) = svec(work.m1[bi]);
    }
  };
  auto scale_z = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    // W v : nonneg w*v ; psd svec(R^T V R)
    for (int i = 0; i < cp.nn_count; ++i) out(i) = v(i) * sc.w_nn(i);
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      smat_into(v.segment(off, svec_dim(m)), m, work.m1[bi]);
      work.m2[bi].noalias() = sc.r[bi].transpose() * work.m1[bi];
      work.m1[bi].noalias() = work.m2[bi] * sc.r[bi];
      out.segment(off, svec_dim(m)) = svec(work.m1[bi]);
    }
  };
  auto unscale_z = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    // W^{-1} v : nonneg v/w ; psd svec(Rinv^T V Rinv)
    for (int i = 0; i < cp.nn_count; ++i) out(i) = v(i) / sc.w_nn(i);
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      smat_into(v.segment(off, svec_dim(m)), m, work.m1[bi]);
      work.m2[bi].noalias() = sc.rinv[bi].transpose() * work.m1[bi];
      work.m1[bi].noalias() = work.m2[bi] * sc.rinv[bi];
      out.segment(off, svec_dim(m)) = svec(work.m1[bi]);
    }
  };
  auto lambda_product = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                            Eigen::VectorXd& out) {
    // u o v in scaled space (Jordan product)
    for (int i = 0; i < cp.nn_count; ++i) out(i) = u(i) * v(i);
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      Eigen::MatrixXd uu, vv;
      smat_into(u.segment(off, svec_dim(m)), m, uu);
      smat_into(v.segment(off, svec_dim(m)), m, vv);
      Eigen::MatrixXd pr = 0.5 * (uu * vv + vv * uu);
      out.segment(off, svec_dim(m)) = svec(pr);
    }
  };
  auto lambda_inv_product = [&](const Eigen::VectorXd& v, Eigen::VectorXd& out) {
    // solve lambda o x = v
    for (int i = 0; i < cp.nn_count; ++i) out(i) = v(i) / sc.lam_nn(i);
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      smat_into(v.segment(off, svec_dim(m)), m, work.m1[bi]);
      for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
          work.m1[bi](r, c) *= 2.0 / (sc.lam[bi](r) + sc.lam[bi](c));
      out.segment(off, svec_dim(m)) = svec(work.m1[bi]);
    }
  };
  auto cone_e = [&](Eigen::VectorXd& out) {
    out.setZero();
    for (int i = 0; i < cp.nn_count; ++i) out(i) = 1.0;
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      for (int c = 0; c < m; ++c) out(off + svec_index(c, c, m)) = 1.0;
    }
  };
  auto shift_interior = [&](Eigen::VectorXd& v) {
    if (cp.nn_count > 0) {
      const double mn = v.head(cp.nn_count).minCoeff();
      const double nrm = v.head(cp.nn_count).cwiseAbs().maxCoeff();
      if (mn <= 1e-8 * std::max(1.0, nrm))
        v.head(cp.nn_count).array() += 1.0 - mn;
    }
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      smat_into(v.segment(off, svec_dim(m)), m, work.m1[bi]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(work.m1[bi], Eigen::EigenvaluesOnly);
      const double mn = eig.eigenvalues()(0);
      const double mx = std::abs(eig.eigenvalues()(m - 1));
      if (mn <= 1e-8 * std::max(1.0, mx)) {
        for (int c = 0; c < m; ++c) v(off + svec_index(c, c, m)) += 1.0 - mn;
      }
    }
  };

  // KKT machinery ----------------------------------------------------------
  Eigen::MatrixXd big_h(n, n);
  Eigen::VectorXd h_equil(n);
  Eigen::LLT<Eigen::MatrixXd> llt_h;
  Eigen::MatrixXd schur_a;
  Eigen::LLT<Eigen::MatrixXd> llt_a;
  std::vector<Eigen::MatrixXd> ghat(nb);
  for (int bi = 0; bi < nb; ++bi)
    ghat[bi].resize(svec_dim(cp.blocks[bi].side),
                    static_cast<int>(cp.blocks[bi].params.size()));

  // Jacobi-equilibrated solve with H; keeps the regularization relative so the
  // benign ill-conditioning of interior-point normal equations stays benign.
  auto hsolve = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return h_equil.asDiagonal() * llt_h.solve(h_equil.asDiagonal() * v);
  };

  auto factor_kkt = [&](bool identity_scaling) -> bool {
    big_h.setZero();
    for (int i = 0; i < cp.nn_count; ++i) {
      const double wi = identity_scaling ? 1.0 : sc.w_nn(i);
      const double inv_w2 = 1.0 / (wi * wi);
      for (const auto& [j1, v1] : cp.nonneg[i].g)
        for (const auto& [j2, v2] : cp.nonneg[i].g)
          big_h(j1, j2) += v1 * v2 * inv_w2;
    }
    for (int bi = 0; bi < nb; ++bi) {
      const Block& b = cp.blocks[bi];
      const int m = b.side;
      const int k = static_cast<int>(b.params.size());
      if (identity_scaling) {
        ghat[bi] = b.g_cols;
      } else {
        for (int col = 0; col < k; ++col) {
          smat_into(b.g_cols.col(col), m, work.m1[bi]);
          work.m2[bi].noalias() = sc.rinv[bi] * work.m1[bi];
          work.m1[bi].noalias() = work.m2[bi] * sc.rinv[bi].transpose();
          ghat[bi].col(col) = svec(work.m1[bi]);
        }
      }
      Eigen::MatrixXd hsub = ghat[bi].transpose() * ghat[bi];
      for (int a = 0; a < k; ++a)
        for (int c = 0; c < k; ++c) big_h(b.params[a], b.params[c]) += hsub(a, c);
    }
    for (int i = 0; i < n; ++i) {
      const double di = big_h(i, i);
      h_equil(i) = di > 1e-300 ? 1.0 / std::sqrt(di) : 1.0;
    }
    double delta = 1e-14;
    for (int attempt = 0; attempt < 4; ++attempt) {
      Eigen::MatrixXd reg =
          h_equil.asDiagonal() * big_h * h_equil.asDiagonal();
      reg.diagonal().array() += delta;
      llt_h.compute(reg);
      if (llt_h.info() == Eigen::Success) {
        if (p > 0) {
          Eigen::MatrixXd hinv_at(n, p);
          for (int j = 0; j < p; ++j) hinv_at.col(j) = hsolve(cp.a_eq.row(j).transpose());
          schur_a = cp.a_eq * hinv_at;
          schur_a.diagonal().array() += delta * std::max(1.0, schur_a.diagonal().maxCoeff());
          llt_a.compute(schur_a);
          if (llt_a.info() != Eigen::Success) {
            delta *= 1e4;
            continue;
          }
        }
        return true;
      }
      delta *= 1e4;
    }
    return false;
  };

  // Gs = W^{-T} G, materialized per iteration as ghat (and 1/w-scaled rows).
  // Only single scalings are ever applied, so the benign ill-conditioning of
  // the scaled system does not get squared.
  auto apply_Gs = [&](const Eigen::VectorXd& x_in, Eigen::VectorXd& out,
                      bool identity_scaling) {
    for (int i = 0; i < cp.nn_count; ++i) {
      double acc = 0.0;
      for (const auto& [j, v] : cp.nonneg[i].g) acc += v * x_in(j);
      out(i) = identity_scaling ? acc : acc / sc.w_nn(i);
    }
    for (int bi = 0; bi < nb; ++bi) {
      const Block& b = cp.blocks[bi];
      Eigen::VectorXd xs(b.params.size());
      for (size_t k = 0; k < b.params.size(); ++k)
        xs(static_cast<int>(k)) = x_in(b.params[k]);
      out.segment(cp.block_offset[bi], svec_dim(b.side)).noalias() = ghat[bi] * xs;
    }
  };
  auto apply_Gst = [&](const Eigen::VectorXd& u, Eigen::VectorXd& out,
                       bool identity_scaling) {
    out.setZero();
    for (int i = 0; i < cp.nn_count; ++i) {
      const double ui = identity_scaling ? u(i) : u(i) / sc.w_nn(i);
      for (const auto& [j, v] : cp.nonneg[i].g) out(j) += v * ui;
    }
    for (int bi = 0; bi < nb; ++bi) {
      const Block& b = cp.blocks[bi];
      Eigen::VectorXd us =
          ghat[bi].transpose() * u.segment(cp.block_offset[bi], svec_dim(b.side));
      for (size_t k = 0; k < b.params.size(); ++k) out(b.params[k]) += us(static_cast<int>(k));
    }
  };

  Eigen::VectorXd tmp_cone(d), tmp_cone2(d), tmp_n(n), k3_rzbar(d), k3_t(n), k3_r1(n);
  // Solves [0 A' G'; A 0 0; G 0 -W'W] (dx, dy, dz) = (rx, ry, rz) through the
  // scaled slack variable uz = W dz, which row 3 pins as uz = Gs dx - W^{-T}rz.
  auto solve_k3 = [&](const Eigen::VectorXd& rx, const Eigen::VectorXd& ry,
                      const Eigen::VectorXd& rz, bool identity_scaling,
                      Eigen::VectorXd& dx, Eigen::VectorXd& dy, Eigen::VectorXd& dz,
                      Eigen::VectorXd& uz) {
    if (identity_scaling)
      k3_rzbar = rz;
    else
      scale_s(rz, k3_rzbar);
    apply_Gst(k3_rzbar, k3_t, identity_scaling);
    k3_t += rx;
    auto solve2 = [&](const Eigen::VectorXd& t_in, const Eigen::VectorXd& r2,
                      Eigen::VectorXd& ox, Eigen::VectorXd& oy) {
      ox = hsolve(t_in);
      if (p > 0) {
        oy = llt_a.solve(cp.a_eq * ox - r2);
        ox = hsolve(t_in - cp.a_eq.transpose() * oy);
      } else {
        oy.resize(0);
      }
    };
    solve2(k3_t, ry, dx, dy);
    // one refinement pass on the reduced (dx, dy) system
    apply_Gs(dx, tmp_cone, identity_scaling);
    apply_Gst(tmp_cone, k3_r1, identity_scaling);
    if (p > 0) k3_r1 += cp.a_eq.transpose() * dy;
    k3_r1 = k3_t - k3_r1;
    Eigen::VectorXd cx(n), cy;
    if (p > 0) {
      solve2(k3_r1, ry - cp.a_eq * dx, cx, cy);
      dy += cy;
    } else {
      solve2(k3_r1, ry, cx, cy);
    }
    dx += cx;
    // recover the cone directions
    apply_Gs(dx, uz, identity_scaling);
    uz -= k3_rzbar;
    if (identity_scaling)
      dz = uz;
    else
      unscale_z(uz, dz);
  };

  // initialization ----------------------------------------------------------
  Eigen::VectorXd x(n), y(p), s(d), z(d);
  double tau = 1.0, kappa = 1.0;
  {
    if (!factor_kkt(true)) {
      sol.status = SolveStatus::kFailed;
      sol.message = "initial KKT factorization failed";
      return sol;
    }
    Eigen::VectorXd dx(n), dy, dz(d), uz0(d);
    // primal start: minimize ||s|| s.t. Ax=b, Gx+s=h
    solve_k3(Eigen::VectorXd::Zero(n), cp.b_eq, h, true, dx, dy, dz, uz0);
    x = dx;
    apply_G(cp, x, tmp_cone);
    s = h - tmp_cone;
    shift_interior(s);
    // dual start
    solve_k3(-cp.c, Eigen::VectorXd::Zero(p), Eigen::VectorXd::Zero(d), true, dx, dy, dz,
             uz0);
    y = dy;
    apply_G(cp, dx, z);
    shift_interior(z);
  }

  Eigen::VectorXd e_cone(d);
  cone_e(e_cone);

  Eigen::VectorXd res_x(n), res_y(p), res_z(d);
  Eigen::VectorXd lam_full(d), lam_sq(d);
  Eigen::VectorXd ds_rhs(d), r3k(d), lam_inv_rhs(d), w_lam_inv(d);
  Eigen::VectorXd ua_x(n), ua_y, ua_z(d), ua_uz(d), ub_x(n), ub_y, ub_z(d), ub_uz(d);
  Eigen::VectorXd dx(n), dy, dz(d), ds(d);
  Eigen::VectorXd us_aff(d), uz_aff(d), cc(d);
  Eigen::VectorXd tmp(d);

  const double tolf = settings.tol_feas;
  const double tolg = settings.tol_gap;
  sol.status = SolveStatus::kFailed;
  sol.message = "iteration limit";
  int iter = 0;
  bool done = false;
  bool certificate_exit = false;
  double cc_tk = 0.0, alpha = 1.0, sigma = 0.0, dtau = 0.0, dkappa = 0.0;

  // best-iterate fallback: a cliff near convergence should degrade the
  // answer, not destroy it
  struct Best {
    double score = std::numeric_limits<double>::infinity();
    double pres = 0, dres = 0, relgap = 0;
    Eigen::VectorXd x, y, z;
    double tau = 1.0;
  } best;

  // snapshot of the pre-step point so an overshoot past the cone boundary can
  // be retried with a shorter step
  struct Prev {
    bool valid = false;
    Eigen::VectorXd x, y, z, s;
    double tau = 1.0, kappa = 1.0;
  } prev;
  double last_alpha = 0.0;
  int backoff = 0;

  for (iter = 0; iter < settings.max_iters && !done; ++iter) {
    // residuals
    apply_Gt(cp, z, res_x);
    if (p > 0) res_x += cp.a_eq.transpose() * y;
    res_x += tau * cp.c;
    if (p > 0) res_y = cp.a_eq * x - tau * cp.b_eq;
    apply_G(cp, x, res_z);
    res_z += s - tau * h;
    const double res_tau =
        cp.c.dot(x) + (p > 0 ? cp.b_eq.dot(y) : 0.0) + h.dot(z) + kappa;

    const double gap = s.dot(z);
    const double mu = (gap + tau * kappa) / (cp.degree + 1);
    if (gap <= 0.0 || mu <= 0.0) {
      sol.message = "complementarity collapsed";
      break;
    }
    const double pobj = cp.c.dot(x) / tau;
    const double dobj = -((p > 0 ? cp.b_eq.dot(y) : 0.0) + h.dot(z)) / tau;

    const double pres = std::max(p > 0 ? res_y.norm() / b_norm : 0.0,
                                 res_z.norm() / h_norm) /
                        tau;
    const double dres = res_x.norm() / (c_norm * tau);
    const double obj_mag = std::max(std::abs(pobj), std::abs(dobj));
    const double relgap = obj_mag > 1e-10 ? (gap / (tau * tau)) / obj_mag
                                          : gap / (tau * tau);

    if (std::getenv("ISAC_CONIC_TRACE"))
      std::fprintf(stderr,
                   "it=%3d pres=%9.2e dres=%9.2e rgap=%9.2e mu=%9.2e tau=%9.2e "
                   "kap=%9.2e pobj=%12.5e dobj=%12.5e\n",
                   iter, pres, dres, relgap, mu, tau, kappa, pobj, dobj);

    const double score = std::max({pres, dres, relgap});
    if (score < best.score) {
      best.score = score;
      best.pres = pres;
      best.dres = dres;
      best.relgap = relgap;
      best.x = x;
      best.y = y;
      best.z = z;
      best.tau = tau;
    }

    if (pres <= tolf && dres <= tolf && relgap <= tolg) {
      sol.status = SolveStatus::kOptimal;
      sol.message = "converged";
      done = true;
      break;
    }
    // Once feasibility is resolved and only the gap is open, the homogeneous
    // iteration can stall on the scaling ray (everything shrinking, recovered
    // point frozen). Freezing tau de-homogenizes the step and forces the gap
    // to close through actual movement of x and z.
    const bool freeze_tau = pres <= tolf && dres <= tolf;
    // infeasibility certificates; only meaningful once tau is collapsing
    // relative to kappa
    if (kappa > 1e4 * tau) {
      const double cert_p = -((p > 0 ? cp.b_eq.dot(y) : 0.0) + h.dot(z));
      if (cert_p > 0.0) {
        apply_Gt(cp, z, tmp_n);
        if (p > 0) tmp_n += cp.a_eq.transpose() * y;
        if (tmp_n.norm() / (c_norm * cert_p) <= tolf * 100) {
          sol.status = SolveStatus::kInfeasible;
          sol.message = "primal infeasible";
          certificate_exit = true;
          done = true;
          break;
        }
      }
      const double cert_d = -cp.c.dot(x);
      if (cert_d > 0.0) {
        apply_G(cp, x, tmp);
        tmp += s;
        const double viol = std::max(p > 0 ? (cp.a_eq * x).norm() : 0.0, tmp.norm());
        if (viol / (std::max(b_norm, h_norm) * cert_d) <= tolf * 100) {
          sol.status = SolveStatus::kFailed;
          sol.message = "dual infeasible (objective unbounded below)";
          certificate_exit = true;
          done = true;
          break;
        }
      }
    }

    // NT scaling
    bool scale_ok = true;
    for (int i = 0; i < cp.nn_count; ++i) {
      if (s(i) <= 0.0 || z(i) <= 0.0) {
        scale_ok = false;
        break;
      }
      sc.w_nn(i) = std::sqrt(s(i) / z(i));
      sc.lam_nn(i) = std::sqrt(s(i) * z(i));
    }
    for (int bi = 0; bi < nb && scale_ok; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      Eigen::MatrixXd sm, zm;
      smat_into(s.segment(off, svec_dim(m)), m, sm);
      smat_into(z.segment(off, svec_dim(m)), m, zm);
      Eigen::LLT<Eigen::MatrixXd> ls(sm), lz(zm);
      if (ls.info() != Eigen::Success) {
        sm.diagonal().array() += 1e-14 * std::max(1.0, sm.trace() / m);
        ls.compute(sm);
      }
      if (lz.info() != Eigen::Success) {
        zm.diagonal().array() += 1e-14 * std::max(1.0, zm.trace() / m);
        lz.compute(zm);
      }
      if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
        scale_ok = false;
        break;
      }
      const Eigen::MatrixXd l_s = ls.matrixL();
      const Eigen::MatrixXd l_z = lz.matrixL();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(l_z.transpose() * l_s,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Eigen::VectorXd sig = svd.singularValues();
      sc.lam[bi] = sig;
      const Eigen::VectorXd inv_sqrt = sig.array().rsqrt();
      sc.r[bi].noalias() = l_s * svd.matrixV() * inv_sqrt.asDiagonal();
      // Rinv = sqrt(Sig) V' Ls^{-1}
      Eigen::MatrixXd lsinv =
          l_s.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(m, m));
      sc.rinv[bi].noalias() =
          sig.array().sqrt().matrix().asDiagonal() * svd.matrixV().transpose() * lsinv;
    }
    if (!scale_ok) {
      if (prev.valid && backoff < 8) {
        ++backoff;
        last_alpha *= 0.5;
        x = prev.x + last_alpha * dx;
        if (p > 0) y = prev.y + last_alpha * dy;
        z = prev.z + last_alpha * dz;
        s = prev.s + last_alpha * ds;
        tau = prev.tau + last_alpha * dtau;
        kappa = prev.kappa + last_alpha * dkappa;
        continue;
      }
      sol.message = "iterate left the cone interior";
      break;
    }
    backoff = 0;

    // Re-derive (s, z) from the scaling identities s = W' lambda, z = W^{-1}
    // lambda so the iterate stays exactly consistent with the NT scaling;
    // accumulated rounding here otherwise biases the Newton directions.
    {
      for (int i = 0; i < cp.nn_count; ++i) tmp(i) = sc.lam_nn(i);
      for (int bi = 0; bi < nb; ++bi) {
        const int off = cp.block_offset[bi];
        const int m = cp.blocks[bi].side;
        tmp.segment(off, svec_dim(m)).setZero();
        for (int cd = 0; cd < m; ++cd)
          tmp(off + svec_index(cd, cd, m)) = sc.lam[bi](cd);
      }
      unscale_s(tmp, s);
      unscale_z(tmp, z);
    }

    if (!factor_kkt(false)) {
      sol.message = "KKT factorization failed";
      break;
    }

    // lambda and lambda o lambda
    for (int i = 0; i < cp.nn_count; ++i) {
      lam_full(i) = sc.lam_nn(i);
      lam_sq(i) = sc.lam_nn(i) * sc.lam_nn(i);
    }
    for (int bi = 0; bi < nb; ++bi) {
      const int off = cp.block_offset[bi];
      const int m = cp.blocks[bi].side;
      lam_full.segment(off, svec_dim(m)).setZero();
      lam_sq.segment(off, svec_dim(m)).setZero();
      for (int cdiag = 0; cdiag < m; ++cdiag) {
        lam_full(off + svec_index(cdiag, cdiag, m)) = sc.lam[bi](cdiag);
        lam_sq(off + svec_index(cdiag, cdiag, m)) = sc.lam[bi](cdiag) * sc.lam[bi](cdiag);
      }
    }

    // u_b = K3^{-1} (-c, b, h); <(c,b,h), u_b> = -||W ub_z||^2 exactly, and the
    // sum-of-squares form avoids the cancellation that wrecks dtau near
    // convergence.
    double wb = 0.0;
    if (!freeze_tau) {
      solve_k3(-cp.c, cp.b_eq, h, false, ub_x, ub_y, ub_z, ub_uz);
      wb = -ub_uz.squaredNorm();
    }

    cc_tk = 0.0;
    alpha = 1.0;
    sigma = 0.0;

    for (int phase = 0; phase < 2; ++phase) {
      const bool corrector = phase == 1;
      ds_rhs = -lam_sq;
      double dtk = -tau * kappa;
      if (corrector) {
        ds_rhs -= cc;
        dtk -= cc_tk;
        ds_rhs += sigma * mu * e_cone;
        dtk += sigma * mu;
      }
      const double fac = corrector ? (1.0 - sigma) : 1.0;

      // R3 = -fac*res_z - W'(lam \ ds_rhs)
      lambda_inv_product(ds_rhs, lam_inv_rhs);
      unscale_s(lam_inv_rhs, w_lam_inv);
      r3k = -fac * res_z - w_lam_inv;
      solve_k3(-fac * res_x, -fac * res_y, r3k, false, ua_x, ua_y, ua_z, ua_uz);

      if (freeze_tau) {
        dtau = 0.0;
      } else {
        const double wa =
            cp.c.dot(ua_x) + (p > 0 ? cp.b_eq.dot(ua_y) : 0.0) + h.dot(ua_z);
        const double denom = wb - kappa / tau;
        if (std::abs(denom) < 1e-300) {
          sol.message = "singular tau system";
          done = true;
          break;
        }
        dtau = (-fac * res_tau - wa - dtk / tau) / denom;
      }
      dx = ua_x;
      if (p > 0) dy = ua_y;
      dz = ua_z;
      if (dtau != 0.0) {
        dx += dtau * ub_x;
        if (p > 0) dy += dtau * ub_y;
        dz += dtau * ub_z;
      }
      dkappa = (dtk - kappa * dtau) / tau;

      // scaled directions: u_z from the K3 solves, u_s from complementarity
      uz_aff = ua_uz;
      if (dtau != 0.0) uz_aff += dtau * ub_uz;
      us_aff = lam_inv_rhs - uz_aff;
      // ds = W'(lam \ ds_rhs) - W' u_z, reusing the W'(lam \ ds_rhs) that
      // entered r3k so the rounding cancels in G dx + ds - h dtau
      unscale_s(uz_aff, ds);
      ds = w_lam_inv - ds;


      // step length in scaled space
      double trate = max_step_rate(cp, lam_full, us_aff, work);
      trate = std::max(trate, max_step_rate(cp, lam_full, uz_aff, work));
      if (dtau < 0.0) trate = std::max(trate, -dtau / tau);
      if (dkappa < 0.0) trate = std::max(trate, -dkappa / kappa);

      if (!corrector) {
        const double alpha_aff = trate > 0.0 ? std::min(1.0, 1.0 / trate) : 1.0;
        sigma = std::pow(1.0 - alpha_aff, 3);
        // Mehrotra correction in scaled space
        lambda_product(us_aff, uz_aff, cc);
        cc_tk = dtau * dkappa;
      } else {
        alpha = trate > 0.0 ? std::min(1.0, 0.99 / trate) : 1.0;
      }
      if (std::getenv("ISAC_CONIC_TRACE"))
        std::fprintf(stderr, "   phase=%d trate=%9.2e sigma=%9.2e alpha=%9.2e dtau=%9.2e\n",
                     phase, trate, sigma, alpha, dtau);
    }
    if (done) break;

    prev.valid = true;
    prev.x = x;
    prev.y = y;
    prev.z = z;
    prev.s = s;
    prev.tau = tau;
    prev.kappa = kappa;
    last_alpha = alpha;

    x += alpha * dx;
    if (p > 0) y += alpha * dy;
    z += alpha * dz;
    s += alpha * ds;
    tau += alpha * dtau;
    kappa += alpha * dkappa;

    if (tau <= 0.0 || kappa < 0.0 || alpha < 1e-11) {
      sol.message = alpha < 1e-11 ? "step size collapsed" : "tau collapsed";
      break;
    }
  }

  sol.iterations = iter;

  // classify any non-certificate exit from the best iterate seen
  if (!certificate_exit && best.score < std::numeric_limits<double>::infinity()) {
    x = best.x;
    y = best.y;
    z = best.z;
    tau = best.tau;
    if (best.pres <= tolf && best.dres <= tolf && best.relgap <= tolg) {
      sol.status = SolveStatus::kOptimal;
      sol.message = "converged";
    } else if (best.pres <= 1e4 * tolf && best.dres <= 1e4 * tolf &&
               best.relgap <= 1e4 * tolg) {
      sol.status = SolveStatus::kInaccurate;
      sol.message = "stopped early (" + sol.message + ")";
    } else {
      sol.status = SolveStatus::kFailed;
    }
  }

  if (sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kInaccurate) {
    const Eigen::VectorXd xs = x / tau;
    for (int i = 0; i < cp.n_scalars; ++i) sol.scalars[problem.scalar_name(i)] = xs(i);
    for (int v = 0; v < problem.n_psd(); ++v) {
      const int side = problem.psd_side(v);
      const auto params = psd_params(side);
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(side, side);
      for (size_t k = 0; k < params.size(); ++k) {
        const double val = xs(cp.psd_offset[v] + static_cast<int>(k));
        const auto& pr = params[k];
        switch (pr.kind) {
          case PsdParam::kDiag: m(pr.i, pr.i) += val; break;
          case PsdParam::kRe:
            m(pr.i, pr.j) += val;
            m(pr.j, pr.i) += val;
            break;
          case PsdParam::kIm:
            m(pr.i, pr.j) += std::complex<double>(0, val);
            m(pr.j, pr.i) += std::complex<double>(0, -val);
            break;
        }
      }
      sol.psd[problem.psd_name(v)] = m;
    }
    sol.objective = cp.c.dot(xs) + cp.offset;

    // residuals of the recovered point on the compiled data
    double prim = 0.0;
    if (p > 0) prim = (cp.a_eq * xs - cp.b_eq).cwiseAbs().maxCoeff();
    for (int i = 0; i < cp.nn_count; ++i) {
      double acc = cp.nonneg[i].h;
      for (const auto& [j, vv] : cp.nonneg[i].g) acc -= vv * xs(j);
      prim = std::max(prim, -acc);
    }
    for (size_t bi = 0; bi < cp.blocks.size(); ++bi) {
      const Block& b = cp.blocks[bi];
      Eigen::VectorXd xsub(b.params.size());
      for (size_t k = 0; k < b.params.size(); ++k)
        xsub(static_cast<int>(k)) = xs(b.params[k]);
      Eigen::MatrixXd sm;
      smat_into(b.h_vec - b.g_cols * xsub, b.side, sm);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sm, Eigen::EigenvaluesOnly);
      prim = std::max(prim, -eig.eigenvalues()(0));
    }
    sol.max_primal_residual = prim;
    apply_Gt(cp, z, tmp_n);
    if (p > 0) tmp_n += cp.a_eq.transpose() * y;
    tmp_n += tau * cp.c;
    sol.max_dual_residual = tmp_n.cwiseAbs().maxCoeff() / tau;
  }

  sol.solve_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return sol;
}

}  // namespace isac::conic
