#include "ctd/symmetry.hpp"

#include "ctd/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace ctd {

namespace {

void append_row(MatX& rows, Eigen::Index& k, const Vec3& p, const Vec3& m, double w)
{
  const double sw = std::sqrt(w);
  rows.block<1, 3>(k, 0) = sw * p.cross(m).transpose();
  rows.block<1, 3>(k, 3) = sw * m.transpose();
  ++k;
}

void normalize_sign(Eigen::Matrix<double, 6, 1>& v)
{
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  if (v(idx) < 0)
    v = -v;
}

} // namespace

RigidAxis rigid_axis(const RigidField& w)
{
  RigidAxis ax;
  const double na = w.a.norm();
  if (na > 1e-12 * std::max(1.0, w.b.norm())) {
    ax.direction = w.a / na;
    ax.point = w.a.cross(w.b) / (na * na);
  } else {
    ax.is_translation = true;
    ax.direction = w.b.normalized();
    ax.point = Vec3::Zero();
  }
  return ax;
}

RigidBasisReport rigid_null_space(const MatX& rows)
{
  if (rows.rows() < 100)
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(rows.rows()) + " samples, at least 100 required");
  Eigen::HouseholderQR<MatX> qr(rows);
  const Eigen::Matrix<double, 6, 6> R =
      qr.matrixQR().topRows(6).triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 6>> svd(R, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  RigidBasisReport rep;
  rep.samples = static_cast<int>(rows.rows());
  rep.singular_values.assign(sv.data(), sv.data() + 6);
  const double smax = sv(0);
  const double thresh = rank_tolerance * smax;
  int dim = 0;
  for (int i = 0; i < 6; ++i)
    if (sv(i) < thresh)
      ++dim;
  rep.dimension = dim;
  const int kept = 6 - dim;
  if (kept == 0)
    rep.gap = 0.0;
  else if (dim == 0)
    rep.gap = sv(5) / thresh;
  else
    rep.gap = sv(kept) > 0.0 ? sv(kept - 1) / sv(kept) : std::numeric_limits<double>::infinity();
  rep.well_separated = rep.gap >= min_gap;
  for (int i = kept; i < 6; ++i) {
    Eigen::Matrix<double, 6, 1> v = svd.matrixV().col(i);
    normalize_sign(v);
    RigidField w{v.head<3>(), v.tail<3>()};
    rep.basis.push_back(w);
    rep.axes.push_back(rigid_axis(w));
  }
  return rep;
}

RigidBasisReport fit_rigid_tangential(const Surface& surface,
                                      const std::vector<QuadraticPolynomial>& constraints)
{
  const auto& nodes = surface.nodes();
  const auto& frames = surface.node_frames();
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size()) * (1 + constraints.size());
  MatX rows(n, 6);
  Eigen::Index k = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const SurfaceFrame& f = frames[i];
    append_row(rows, k, f.y, f.n, nodes[i].weight);
    for (const auto& c : constraints)
      append_row(rows, k, f.y, f.P * c.gradient(f.y), nodes[i].weight);
  }
  if (static_cast<Eigen::Index>(nodes.size()) < 100)
    throw Error(ErrorCode::InsufficientSamples,
                std::to_string(nodes.size()) + " samples, at least 100 required");
  return rigid_null_space(rows);
}

EigenstructureReport eigenstructure_check(const Surface& surface, const RigidField& w, int samples,
                                          std::uint64_t seed)
{
  double normal = 0.0;
  for (const auto& f : surface.node_frames())
    normal = std::max(normal, std::abs(w(f.y).dot(f.n)));
  if (normal >= 1e-8 * (w.a.norm() + w.b.norm()))
    throw Error(ErrorCode::NotInR, "rigid field is not tangent to the surface, max |w.n| = " +
                                       std::to_string(normal));
  std::mt19937_64 rng(seed);
  EigenstructureReport rep;
  const Chart& ch = surface.charts().front();
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < samples; ++k) {
    Vec2 s;
    for (int i = 0; i < 2; ++i) {
      const double margin = ch.periodic[i] ? 0.0 : 0.02 * (ch.hi(i) - ch.lo(i));
      s(i) = ch.lo(i) + margin + (ch.hi(i) - ch.lo(i) - 2.0 * margin) * u01(rng);
    }
    const SurfaceFrame f = surface.frame_at(0, s);
    const Vec3 wy = w(f.y);
    if (wy.norm() <= 1e-8) {
      ++rep.skipped;
      continue;
    }
    const Vec3 Ww = f.W * wy;
    const double lambda = wy.dot(Ww) / wy.squaredNorm();
    rep.max_eigen_residual = std::max(rep.max_eigen_residual, (Ww - lambda * wy).norm());
    rep.max_axis_residual = std::max(rep.max_axis_residual, (w.a.cross(f.n) + lambda * wy).norm());
    ++rep.checked;
  }
  return rep;
}

ThinSymmetryReport thin_domain_symmetry(const ThinDomain& dom)
{
  const auto& b0 = dom.boundary_nodes(0);
  const auto& b1 = dom.boundary_nodes(1);
  MatX rows(static_cast<Eigen::Index>(b0.size() + b1.size()), 6);
  Eigen::Index k = 0;
  for (const auto* side : {&b0, &b1})
    for (const auto& b : *side)
      append_row(rows, k, b.x, b.n_eps, b.weight);
  ThinSymmetryReport rep;
  rep.boundary = rigid_null_space(rows);
  rep.surface = fit_rigid_tangential(dom.surface(), {dom.g(0), dom.g(1)});
  rep.agree = rep.boundary.dimension == rep.surface.dimension;
  return rep;
}

} // namespace ctd
