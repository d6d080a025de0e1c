#include "surftrack/energy.hpp"

#include <algorithm>
#include <cmath>

#include "surftrack/parallel.hpp"

namespace surftrack {

const char* const kTermNames[kNumTerms] = {
    "photo", "smooth", "edge", "arap", "vel", "acc", "tex"};

double TermEvaluation::energy() const {
  double e = 0.0;
  for (const ResidualBlock& b : blocks)
    if (b.active) e += b.r.head(residual_dim).squaredNorm();
  return e;
}

int TermEvaluation::active_count() const {
  int n = 0;
  for (const ResidualBlock& b : blocks) n += b.active ? 1 : 0;
  return n;
}

Eigen::Matrix3d euler_to_rotation(const Eigen::Vector3d& phi) {
  const double ca = std::cos(phi[0]), sa = std::sin(phi[0]);
  const double cb = std::cos(phi[1]), sb = std::sin(phi[1]);
  const double cc = std::cos(phi[2]), sc = std::sin(phi[2]);
  Eigen::Matrix3d Rx, Ry, Rz;
  Rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
  Ry << cb, 0, sb, 0, 1, 0, -sb, 0, cb;
  Rz << cc, -sc, 0, sc, cc, 0, 0, 0, 1;
  return Rz * Ry * Rx;
}

std::array<Eigen::Matrix3d, 3> euler_rotation_derivatives(const Eigen::Vector3d& phi) {
  const double ca = std::cos(phi[0]), sa = std::sin(phi[0]);
  const double cb = std::cos(phi[1]), sb = std::sin(phi[1]);
  const double cc = std::cos(phi[2]), sc = std::sin(phi[2]);
  Eigen::Matrix3d Rx, Ry, Rz, dRx, dRy, dRz;
  Rx << 1, 0, 0, 0, ca, -sa, 0, sa, ca;
  Ry << cb, 0, sb, 0, 1, 0, -sb, 0, cb;
  Rz << cc, -sc, 0, sc, cc, 0, 0, 0, 1;
  dRx << 0, 0, 0, 0, -sa, -ca, 0, ca, -sa;
  dRy << -sb, 0, cb, 0, 0, 0, -cb, 0, -sb;
  dRz << -sc, -cc, 0, cc, -sc, 0, 0, 0, 0;
  return {Rz * Ry * dRx, Rz * dRy * Rx, dRz * Ry * Rx};
}

TermEvaluation residuals_photo(const DeformState& state, const TemplateMesh& mesh,
                               const ImageRGB& frame_smoothed, const Intrinsics& K,
                               double sigma_color_threshold) {
  const int n = state.vertex_count();
  TermEvaluation eval;
  eval.residual_dim = 3;
  eval.blocks.resize(n);

  parallel_for(0, n, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      ResidualBlock& blk = eval.blocks[i];
      const Eigen::Vector3d v = state.V.row(i).transpose();
      if (!(v.z() > kDepthEpsilon)) continue;  // behind camera: pruned

      const Eigen::Vector2d p = project(K, v);
      const BilinearSample s = sample_bilinear(frame_smoothed, p);
      if (!s.in_view) continue;  // out of view: pruned

      const Eigen::Vector3d r = s.rgb - mesh.vertex_colors.row(i).transpose();
      if (r.lpNorm<Eigen::Infinity>() > sigma_color_threshold) continue;  // sigma-pruned

      blk.active = true;
      blk.gate_tag = 1;
      blk.r = r;
      blk.n_jac = 1;
      blk.jac[0].vertex = i;
      blk.jac[0].var = Var::Position;
      blk.jac[0].J = s.gradient * project_jacobian(K, v);
    }
  });
  return eval;
}

TermEvaluation residuals_smooth(const DeformState& state, const TemplateMesh& mesh) {
  TermEvaluation eval;
  eval.residual_dim = 3;
  eval.blocks.resize(mesh.edges.size());
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [i, j] = mesh.edges[e];
    ResidualBlock& blk = eval.blocks[e];
    blk.active = true;
    blk.r = (state.V.row(i) - state.V.row(j)).transpose() -
            (mesh.vertices.row(i) - mesh.vertices.row(j)).transpose();
    blk.n_jac = 2;
    blk.jac[0] = {i, Var::Position, Eigen::Matrix3d::Identity()};
    blk.jac[1] = {j, Var::Position, -Eigen::Matrix3d::Identity()};
  }
  return eval;
}

TermEvaluation residuals_edge(const DeformState& state, const TemplateMesh& mesh) {
  TermEvaluation eval;
  eval.residual_dim = 1;
  eval.blocks.resize(mesh.edges.size());
  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [i, j] = mesh.edges[e];
    ResidualBlock& blk = eval.blocks[e];
    const Eigen::Vector3d d = (state.V.row(i) - state.V.row(j)).transpose();
    const double len = d.norm();
    blk.active = true;
    blk.r[0] = len - mesh.rest_edge_lengths[e];
    blk.n_jac = 2;
    blk.jac[0].vertex = i;
    blk.jac[0].var = Var::Position;
    blk.jac[1].vertex = j;
    blk.jac[1].var = Var::Position;
    if (len > kDepthEpsilon) {
      const Eigen::RowVector3d dir = d.transpose() / len;
      blk.jac[0].J.row(0) = dir;
      blk.jac[1].J.row(0) = -dir;
    } else {
      // Coincident vertices: keep the residual, zero the direction.
      blk.gate_tag = 1;
    }
  }
  return eval;
}

TermEvaluation residuals_arap(const DeformState& state, const TemplateMesh& mesh) {
  TermEvaluation eval;
  eval.residual_dim = 3;
  eval.blocks.resize(mesh.edges.size());

  const int n = state.vertex_count();
  std::vector<Eigen::Matrix3d> rot(n);
  std::vector<std::array<Eigen::Matrix3d, 3>> drot(n);
  parallel_for(0, n, [&](int lo, int hi) {
    for (int i = lo; i < hi; ++i) {
      const Eigen::Vector3d phi = state.Phi.row(i).transpose();
      rot[i] = euler_to_rotation(phi);
      drot[i] = euler_rotation_derivatives(phi);
    }
  });

  for (size_t e = 0; e < mesh.edges.size(); ++e) {
    const auto [i, j] = mesh.edges[e];
    ResidualBlock& blk = eval.blocks[e];
    const Eigen::Vector3d rest = (mesh.vertices.row(i) - mesh.vertices.row(j)).transpose();
    blk.active = true;
    blk.r = (state.V.row(i) - state.V.row(j)).transpose() - rot[i] * rest;
    blk.n_jac = 3;
    blk.jac[0] = {i, Var::Position, Eigen::Matrix3d::Identity()};
    blk.jac[1] = {j, Var::Position, -Eigen::Matrix3d::Identity()};
    blk.jac[2].vertex = i;
    blk.jac[2].var = Var::Angle;
    for (int k = 0; k < 3; ++k) blk.jac[2].J.col(k) = -(drot[i][k] * rest);
  }
  return eval;
}

TermEvaluation residuals_velocity(const DeformState& state) {
  TermEvaluation eval;
  eval.residual_dim = 3;
  eval.blocks.resize(state.vertex_count());
  for (int i = 0; i < state.vertex_count(); ++i) {
    ResidualBlock& blk = eval.blocks[i];
    blk.active = true;
    blk.r = (state.V.row(i) - state.V_prev.row(i)).transpose();
    blk.n_jac = 1;
    blk.jac[0] = {i, Var::Position, Eigen::Matrix3d::Identity()};
  }
  return eval;
}

TermEvaluation residuals_acceleration(const DeformState& state) {
  TermEvaluation eval;
  eval.residual_dim = 3;
  eval.blocks.resize(state.vertex_count());
  for (int i = 0; i < state.vertex_count(); ++i) {
    ResidualBlock& blk = eval.blocks[i];
    blk.active = true;
    blk.r = (state.V.row(i) - 2.0 * state.V_prev.row(i) + state.V_prev2.row(i)).transpose();
    blk.n_jac = 1;
    blk.jac[0] = {i, Var::Position, Eigen::Matrix3d::Identity()};
  }
  return eval;
}

int TriangleDfgTable::valid_count() const {
  int n = 0;
  for (auto v : valid) n += v ? 1 : 0;
  return n;
}

TriangleDfgTable precompute_texture_dfg(const TemplateMesh& mesh,
                                        const HogParams& hog) {
  const int f = mesh.face_count();
  TriangleDfgTable table;
  table.barycentric = Eigen::MatrixX3d::Zero(f, 3);
  table.uv_center = Eigen::MatrixX2d::Zero(f, 2);
  table.valid.assign(f, 0);

  ImageGray gray = to_grayscale(mesh.texture);
  if (hog.presmooth_sigma > 0.0) gray = gaussian_smooth(gray, hog.presmooth_sigma);

  for (int t = 0; t < f; ++t) {
    const Eigen::Vector2d ua = mesh.uvs.row(mesh.faces(t, 0)).transpose();
    const Eigen::Vector2d ub = mesh.uvs.row(mesh.faces(t, 1)).transpose();
    const Eigen::Vector2d uc = mesh.uvs.row(mesh.faces(t, 2)).transpose();
    const Eigen::Vector2d center = (ua + ub + uc) / 3.0;
    table.uv_center.row(t) = center.transpose();

    // The HOG neighborhood is the triangle's UV bounding box.
    PixelRect rect{
        (int)std::floor(std::min({ua.x(), ub.x(), uc.x()})),
        (int)std::floor(std::min({ua.y(), ub.y(), uc.y()})),
        (int)std::ceil(std::max({ua.x(), ub.x(), uc.x()})),
        (int)std::ceil(std::max({ua.y(), ub.y(), uc.y()}))};
    const HogHistogram h = hog_over_rect(gray, rect, hog.bins, hog.mag_threshold);
    const Eigen::Vector2d dir = dominant_direction(h, hog.freq_threshold);
    if (dir.isZero()) continue;  // no line pattern under this triangle

    Eigen::Vector3d weights;
    try {
      weights = barycentric_of_point(center + dir, ua, ub, uc);
    } catch (const std::runtime_error&) {
      continue;  // degenerate UV triangle
    }
    table.barycentric.row(t) = weights.transpose();
    table.valid[t] = 1;
  }
  return table;
}

TermEvaluation residuals_texture(const DeformState& state, const TemplateMesh& mesh,
                                 const TriangleDfgTable& table,
                                 const OrientationField& field, const Intrinsics& K,
                                 double rho_angle_threshold_deg) {
  const int f = mesh.face_count();
  TermEvaluation eval;
  eval.residual_dim = 2;
  eval.blocks.resize(f);
  const double cos_threshold = std::cos(rho_angle_threshold_deg * M_PI / 180.0);

  parallel_for(0, f, [&](int lo, int hi) {
    for (int t = lo; t < hi; ++t) {
      if (!table.valid[t]) continue;
      ResidualBlock& blk = eval.blocks[t];
      const int k = mesh.faces(t, 0), m = mesh.faces(t, 1), l = mesh.faces(t, 2);
      const Eigen::Vector3d vk = state.V.row(k).transpose();
      const Eigen::Vector3d vm = state.V.row(m).transpose();
      const Eigen::Vector3d vl = state.V.row(l).transpose();
      const Eigen::Vector3d B = table.barycentric.row(t).transpose();

      const Eigen::Vector3d b3d = B[0] * vk + B[1] * vm + B[2] * vl;
      const Eigen::Vector3d z3d = (vk + vm + vl) / 3.0;
      if (!(b3d.z() > kDepthEpsilon) || !(z3d.z() > kDepthEpsilon)) continue;

      const Eigen::Vector2d pz = project(K, z3d);
      const int px = (int)std::lround(pz.x()), py = (int)std::lround(pz.y());
      if (!field.contains(px, py)) continue;
      const Eigen::Vector2d d_frame = field.dir(px, py);
      if (d_frame.isZero()) continue;  // no pattern under the projected center

      const Eigen::Vector2d u = project(K, b3d) - pz;
      const double ulen = u.norm();
      if (!(ulen > 1e-12)) continue;
      const Eigen::Vector2d d_mesh = u / ulen;

      // rho: the smaller difference against +/- d_frame; reject if the
      // directions still disagree by more than the angular threshold.
      const double sign = d_mesh.dot(d_frame) >= 0.0 ? 1.0 : -1.0;
      if (d_mesh.dot(sign * d_frame) < cos_threshold) continue;

      blk.active = true;
      blk.gate_tag = (std::uint32_t)(py * field.width + px) * 4u + (sign > 0 ? 1u : 2u);
      blk.r.head<2>() = d_mesh - sign * d_frame;

      const Eigen::Matrix2d normalization =
          (Eigen::Matrix2d::Identity() - d_mesh * d_mesh.transpose()) / ulen;
      const Eigen::Matrix<double, 2, 3> Jb = project_jacobian(K, b3d);
      const Eigen::Matrix<double, 2, 3> Jz = project_jacobian(K, z3d);
      blk.n_jac = 3;
      const int verts[3] = {k, m, l};
      for (int c = 0; c < 3; ++c) {
        blk.jac[c].vertex = verts[c];
        blk.jac[c].var = Var::Position;
        blk.jac[c].J.topRows<2>() = normalization * (B[c] * Jb - (1.0 / 3.0) * Jz);
      }
    }
  });
  return eval;
}

namespace {

bool term_enabled(TermId id, const EvalInputs& in) {
  const EnergyWeights& w = in.weights;
  switch (id) {
    case kPhoto:  return w.lambda_photo > 0 && in.frame_smoothed != nullptr;
    case kSmooth: return w.lambda_smooth > 0;
    case kEdge:   return w.lambda_edge > 0;
    case kArap:   return w.lambda_arap > 0;
    case kVel:    return w.lambda_vel > 0;
    case kAcc:    return w.lambda_acc > 0 && in.acceleration_enabled;
    case kTex:    return w.lambda_tex > 0 && in.field != nullptr && in.dfg != nullptr;
    default:      return false;
  }
}

}  // namespace

EvaluationSet evaluate_all(const DeformState& state, const EvalInputs& in) {
  EvaluationSet out;
  const EnergyWeights& w = in.weights;
  if (term_enabled(kPhoto, in))
    out.terms[kPhoto] = residuals_photo(state, *in.mesh, *in.frame_smoothed,
                                        in.intrinsics, w.sigma_color_threshold);
  if (term_enabled(kSmooth, in)) out.terms[kSmooth] = residuals_smooth(state, *in.mesh);
  if (term_enabled(kEdge, in)) out.terms[kEdge] = residuals_edge(state, *in.mesh);
  if (term_enabled(kArap, in)) out.terms[kArap] = residuals_arap(state, *in.mesh);
  if (term_enabled(kVel, in)) out.terms[kVel] = residuals_velocity(state);
  if (term_enabled(kAcc, in)) out.terms[kAcc] = residuals_acceleration(state);
  if (term_enabled(kTex, in))
    out.terms[kTex] = residuals_texture(state, *in.mesh, *in.dfg, *in.field,
                                        in.intrinsics, w.rho_angle_threshold);
  return out;
}

EnergyBreakdown total_energy(const EvaluationSet& evals, const EnergyWeights& w) {
  const double lambdas[kNumTerms] = {w.lambda_photo, w.lambda_smooth, w.lambda_edge,
                                     w.lambda_arap, w.lambda_vel, w.lambda_acc,
                                     w.lambda_tex};
  EnergyBreakdown out;
  for (int t = 0; t < kNumTerms; ++t) {
    out.term[t] = lambdas[t] * evals.terms[t].energy();
    out.total += out.term[t];
  }
  return out;
}

EnergyBreakdown total_energy(const DeformState& state, const EvalInputs& inputs) {
  return total_energy(evaluate_all(state, inputs), inputs.weights);
}

}  // namespace surftrack
