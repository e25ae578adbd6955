#include "ctd/korn.hpp"

#include "ctd/errors.hpp"
#include "ctd/symmetry.hpp"

#include <array>
#include <cmath>

namespace ctd {

const char* to_string(Orthogonality m)
{
  switch (m) {
  case Orthogonality::None: return "none";
  case Orthogonality::AgainstReps: return "against_R_eps";
  case Orthogonality::AgainstRg: return "against_R_g";
  case Orthogonality::AgainstKgExtension: return "against_Kg_extension";
  }
  return "unknown";
}

NormReport norms(const ThinDomain& dom, const AmbientVectorField& u)
{
  NormReport r;
  for (const auto& v : dom.volume_nodes()) {
    const Vec3 val = u(v.x);
    const Mat3 g = u.jacobian(v.x);
    r.l2 += v.weight * val.squaredNorm();
    r.grad += v.weight * g.squaredNorm();
    r.strain += v.weight * sym(g).squaredNorm();
  }
  for (int i = 0; i < 2; ++i)
    for (const auto& b : dom.boundary_nodes(i)) {
      const Vec3 val = u(b.x);
      r.boundary[i] += b.weight * val.squaredNorm();
      const double un = val.dot(b.n_eps);
      r.impermeability += b.weight * un * un;
    }
  if (!std::isfinite(r.l2) || !std::isfinite(r.grad) || !std::isfinite(r.impermeability))
    throw Error(ErrorCode::NonFiniteInput, "field norms are not finite");
  return r;
}

double l2_inner(const ThinDomain& dom, const AmbientVectorField& u, const AmbientVectorField& v)
{
  double s = 0.0;
  for (const auto& n : dom.volume_nodes())
    s += n.weight * u(n.x).dot(v(n.x));
  return s;
}

double bilinear_form(const ThinDomain& dom, const AmbientVectorField& u1,
                     const AmbientVectorField& u2)
{
  double vol = 0.0;
  for (const auto& n : dom.volume_nodes())
    vol += n.weight * (sym(u1.jacobian(n.x)).cwiseProduct(sym(u2.jacobian(n.x)))).sum();
  double out = 2.0 * dom.nu() * vol;
  for (int i = 0; i < 2; ++i) {
    if (dom.gamma(i) == 0.0)
      continue;
    double b = 0.0;
    for (const auto& bn : dom.boundary_nodes(i))
      b += bn.weight * u1(bn.x).dot(u2(bn.x));
    out += dom.gamma(i) * b;
  }
  return out;
}

double rayleigh(const NormReport& n)
{
  if (n.strain <= 1e-14 * n.h1())
    throw Error(ErrorCode::RigidDegenerate,
                "||D u||^2 = " + std::to_string(n.strain) + " is negligible against ||u||_H1^2");
  return n.h1() / n.strain;
}

double rayleigh(const ThinDomain& dom, const AmbientVectorField& u)
{
  return rayleigh(norms(dom, u));
}

std::vector<AmbientVectorField> constraint_fields(const ThinDomain& dom, Orthogonality mode)
{
  std::vector<AmbientVectorField> out;
  switch (mode) {
  case Orthogonality::None:
    break;
  case Orthogonality::AgainstReps: {
    const auto rep = thin_domain_symmetry(dom).boundary;
    for (const auto& w : rep.basis)
      out.push_back(w.field("R_eps"));
    break;
  }
  case Orthogonality::AgainstRg: {
    const QuadraticPolynomial g = dom.g(1) + QuadraticPolynomial(0.0, -dom.g(0).linear(),
                                                                 -dom.g(0).quadratic());
    const auto rep = fit_rigid_tangential(dom.surface(), {g});
    for (const auto& w : rep.basis)
      out.push_back(w.field("R_g"));
    break;
  }
  case Orthogonality::AgainstKgExtension: {
    const QuadraticPolynomial g = dom.g(1) + QuadraticPolynomial(0.0, -dom.g(0).linear(),
                                                                 -dom.g(0).quadratic());
    const auto rep = fit_rigid_tangential(dom.surface(), {g});
    const ClosestPointMap* cp = &dom.cpmap();
    for (const auto& w : rep.basis) {
      const Mat3 A = rotation_gradient(w.a);
      out.push_back({[cp, w](const Vec3& x) -> Vec3 { return w(cp->project(x).y); },
                     [cp, A](const Vec3& x) -> Mat3 {
                       const ClosestPoint p = cp->project(x);
                       const SurfaceFrame f = cp->surface().frame_at(p.chart, p.s);
                       return (Mat3::Identity() - p.d * f.W).partialPivLu().solve(f.P * A);
                     },
                     "K_g_extension", Provenance::Analytic});
    }
    break;
  }
  }
  return out;
}

double max_alignment(const ThinDomain& dom, const AmbientVectorField& u,
                     const std::vector<AmbientVectorField>& ws)
{
  if (ws.empty())
    return 0.0;
  const Eigen::Index k = static_cast<Eigen::Index>(ws.size());
  MatX G = MatX::Zero(k, k);
  VecX c = VecX::Zero(k);
  double uu = 0.0;
  std::vector<Vec3> wv(ws.size());
  for (const auto& n : dom.volume_nodes()) {
    const Vec3 uv = u(n.x);
    for (Eigen::Index a = 0; a < k; ++a)
      wv[a] = ws[a](n.x);
    uu += n.weight * uv.squaredNorm();
    for (Eigen::Index a = 0; a < k; ++a) {
      c(a) += n.weight * uv.dot(wv[a]);
      for (Eigen::Index b = 0; b <= a; ++b)
        G(a, b) += n.weight * wv[a].dot(wv[b]);
    }
  }
  G = G.selfadjointView<Eigen::Lower>();
  if (uu <= 0.0)
    return 0.0;
  const double proj = c.dot(G.ldlt().solve(c));
  return std::sqrt(std::max(0.0, proj) / uu);
}

ScalingFit fit_scaling(const std::vector<double>& eps, const std::vector<double>& values)
{
  if (eps.size() != values.size() || eps.size() < 3)
    throw Error(ErrorCode::InsufficientSamples, "scaling fit needs at least three pairs");
  const Eigen::Index n = static_cast<Eigen::Index>(eps.size());
  Eigen::MatrixX2d A(n, 2);
  VecX b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0) || !(values[i] > 0.0))
      throw Error(ErrorCode::NonPositiveValue, "scaling fit needs positive data");
    A(i, 0) = std::log(eps[i]);
    A(i, 1) = 1.0;
    b(i) = std::log(values[i]);
  }
  const Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
  ScalingFit fit;
  fit.slope = x(0);
  fit.intercept = x(1);
  fit.residual_rms = std::sqrt((A * x - b).squaredNorm() / static_cast<double>(n));
  return fit;
}

ScalingReport korn_lower_bound_sweep(const std::vector<ThinDomain>& family, const FieldFamily& fields,
                                     const KornConfig& config)
{
  ScalingReport rep;
  std::vector<double> eps, vals;
  for (const auto& dom : family) {
    SweepPoint pt;
    pt.eps = dom.eps();
    const auto ws = constraint_fields(dom, config.mode);
    double best = 0.0;
    for (const auto& u : fields(dom)) {
      const NormReport n = norms(dom, u);
      const double bnorm = n.boundary[0] + n.boundary[1];
      if (!(n.impermeability <= config.impermeability_tol * config.impermeability_tol * bnorm)) {
        pt.rejections.push_back(u.tag + ": impermeability residual " +
                                std::to_string(std::sqrt(n.impermeability)));
        continue;
      }
      const double align = max_alignment(dom, u, ws);
      // roundoff allowance so that beta = 0 admits exactly orthogonal fields
      if (align > config.beta + 1e-12) {
        pt.rejections.push_back(u.tag + ": alignment " + std::to_string(align) + " exceeds beta");
        continue;
      }
      best = std::max(best, rayleigh(n));
      ++pt.admissible;
    }
    if (pt.admissible == 0) {
      std::string why;
      for (const auto& r : pt.rejections)
        why += "; " + r;
      throw Error(ErrorCode::NoAdmissibleField, "eps = " + std::to_string(pt.eps) + why);
    }
    pt.value = best;
    eps.push_back(pt.eps);
    vals.push_back(best);
    rep.points.push_back(std::move(pt));
  }
  if (eps.size() >= 3)
    rep.fit = fit_scaling(eps, vals);
  return rep;
}

namespace {

struct Monomials {
  std::vector<std::array<int, 3>> exps;
  explicit Monomials(int degree)
  {
    for (int d = 0; d <= degree; ++d)
      for (int i = d; i >= 0; --i)
        for (int j = d - i; j >= 0; --j)
          exps.push_back({i, j, d - i - j});
  }
  int size() const { return static_cast<int>(exps.size()); }

  // values and partial derivatives at x
  void eval(const Vec3& x, int degree, VecX& m, MatX& dm) const
  {
    std::array<std::vector<double>, 3> pw;
    for (int c = 0; c < 3; ++c) {
      pw[c].assign(degree + 1, 1.0);
      for (int p = 1; p <= degree; ++p)
        pw[c][p] = pw[c][p - 1] * x(c);
    }
    for (int a = 0; a < size(); ++a) {
      const auto& e = exps[a];
      m(a) = pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
      for (int c = 0; c < 3; ++c) {
        if (e[c] == 0) {
          dm(c, a) = 0.0;
          continue;
        }
        double v = e[c];
        for (int q = 0; q < 3; ++q)
          v *= pw[q][q == c ? e[q] - 1 : e[q]];
        dm(c, a) = v;
      }
    }
  }
};

} // namespace

EigenEstimate korn_eigen_estimate(const ThinDomain& dom, const KornConfig& config)
{
  if (config.degree < 1 || config.degree > 4)
    throw Error(ErrorCode::ValidationError, "trial degree must lie in [1, 4]");
  const Monomials mono(config.degree);
  const int ns = mono.size();
  const int nb = 3 * ns;

  // scalar Grams: mass, K(i, j) = int d_i m d_j m', boundary N(c, c') = int m m' n_c n_c'
  MatX mass = MatX::Zero(ns, ns);
  std::array<MatX, 9> K, N;
  for (auto& k : K)
    k = MatX::Zero(ns, ns);
  for (auto& k : N)
    k = MatX::Zero(ns, ns);

  const auto ws = constraint_fields(dom, config.mode);
  const Eigen::Index nk = static_cast<Eigen::Index>(ws.size());
  MatX C = MatX::Zero(nb, nk); // (phi_i, w_k)

  VecX m(ns);
  MatX dm(3, ns);
  const auto& vol = dom.volume_nodes();
  const Eigen::Index chunk = 2048;
  MatX Mv(ns, chunk);
  std::array<MatX, 3> Dv;
  for (auto& d : Dv)
    d.resize(ns, chunk);
  for (std::size_t start = 0; start < vol.size(); start += chunk) {
    const Eigen::Index len = std::min<Eigen::Index>(chunk, vol.size() - start);
    for (Eigen::Index q = 0; q < len; ++q) {
      const VolumeNode& v = vol[start + q];
      mono.eval(v.x, config.degree, m, dm);
      const double sw = std::sqrt(v.weight);
      Mv.col(q) = sw * m;
      for (int c = 0; c < 3; ++c)
        Dv[c].col(q) = sw * dm.row(c).transpose();
      for (Eigen::Index k = 0; k < nk; ++k) {
        const Vec3 w = ws[k](v.x);
        for (int c = 0; c < 3; ++c)
          C.block(c * ns, k, ns, 1) += (v.weight * w(c)) * m;
      }
    }
    const auto Mb = Mv.leftCols(len);
    mass.noalias() += Mb * Mb.transpose();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        K[3 * i + j].noalias() += Dv[i].leftCols(len) * Dv[j].leftCols(len).transpose();
  }
  for (int side = 0; side < 2; ++side)
    for (const auto& b : dom.boundary_nodes(side)) {
      mono.eval(b.x, config.degree, m, dm);
      for (int c = 0; c < 3; ++c)
        for (int cp = 0; cp < 3; ++cp)
          N[3 * c + cp].noalias() += (b.weight * b.n_eps(c) * b.n_eps(cp)) * (m * m.transpose());
    }

  const double eta = config.penalty_scale * dom.eps();
  const MatX lap = K[0] + K[4] + K[8];
  MatX M = MatX::Zero(nb, nb), A = MatX::Zero(nb, nb);
  for (int c = 0; c < 3; ++c) {
    M.block(c * ns, c * ns, ns, ns) = mass + lap;
    for (int cp = 0; cp < 3; ++cp) {
      MatX S = 0.5 * K[3 * cp + c];
      if (c == cp)
        S += 0.5 * lap;
      A.block(c * ns, cp * ns, ns, ns) = S + N[3 * c + cp] / eta;
    }
  }

  // restrict to coefficient vectors orthogonal to the constraint fields
  MatX Z;
  if (nk > 0) {
    Eigen::JacobiSVD<MatX> svd(C.transpose(), Eigen::ComputeFullV);
    const double tol = 1e-10 * svd.singularValues()(0);
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()(i) > tol)
        ++rank;
    Z = svd.matrixV().rightCols(nb - rank);
  } else {
    Z = MatX::Identity(nb, nb);
  }
  const MatX Mr = Z.transpose() * M * Z;
  const MatX Ar = Z.transpose() * A * Z;

  Eigen::SelfAdjointEigenSolver<MatX> em(Mr);
  const double mmax = em.eigenvalues().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < em.eigenvalues().size(); ++i)
    if (em.eigenvalues()(i) > 1e-13 * mmax)
      keep.push_back(i);
  MatX B(Mr.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i)
    B.col(i) = em.eigenvectors().col(keep[i]) / std::sqrt(em.eigenvalues()(keep[i]));
  const MatX As = B.transpose() * Ar * B;
  Eigen::SelfAdjointEigenSolver<MatX> ea(0.5 * (As + As.transpose()), Eigen::EigenvaluesOnly);
  const double mu_min = ea.eigenvalues()(0);
  const double dim = static_cast<double>(As.rows());
  if (!(mu_min >= 1e-12 * As.trace() / dim))
    throw Error(ErrorCode::SingularA, "smallest eigenvalue " + std::to_string(mu_min) +
                                          " against mean " + std::to_string(As.trace() / dim));
  EigenEstimate est;
  est.lambda_max = 1.0 / mu_min;
  est.dimension = static_cast<int>(As.rows());
  est.deflated = nb - static_cast<int>(Z.cols());
  return est;
}

} // namespace ctd
