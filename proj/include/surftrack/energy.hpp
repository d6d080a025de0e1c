#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "surftrack/camera.hpp"
#include "surftrack/mesh.hpp"
#include "surftrack/orientation.hpp"

namespace surftrack {

// Hyperparameters of the tracking energy; fixed before optimization starts.
struct EnergyWeights {
  double lambda_photo = 1.0;
  double lambda_smooth = 2.0;
  double lambda_edge = 10.0;
  double lambda_arap = 2.0;
  double lambda_vel = 0.1;
  double lambda_acc = 0.1;
  double lambda_tex = 0.5;
  double sigma_color_threshold = 60.0;  // gray-levels, per-channel max
  double rho_angle_threshold = 45.0;    // degrees
  double smoothing_sigma = 2.0;         // frame pre-smoothing, pixels
};

// Per-frame unknowns plus the two previous frames' solutions.
struct DeformState {
  Eigen::MatrixX3d V;        // current vertex estimate
  Eigen::MatrixX3d Phi;      // per-vertex Euler angles, radians
  Eigen::MatrixX3d V_prev;   // solution at t
  Eigen::MatrixX3d V_prev2;  // solution at t-1

  int vertex_count() const { return (int)V.rows(); }

  static DeformState rest(const TemplateMesh& mesh) {
    DeformState s;
    s.V = mesh.vertices;
    s.Phi = Eigen::MatrixX3d::Zero(mesh.vertices.rows(), 3);
    s.V_prev = mesh.vertices;
    s.V_prev2 = mesh.vertices;
    return s;
  }
};

// Extrinsic X-Y-Z convention: R = Rz(phi_3) * Ry(phi_2) * Rx(phi_1).
Eigen::Matrix3d euler_to_rotation(const Eigen::Vector3d& phi);

// dR/dphi_k for k = 0,1,2.
std::array<Eigen::Matrix3d, 3> euler_rotation_derivatives(const Eigen::Vector3d& phi);

enum class Var : int { Position = 0, Angle = 1 };

struct JacEntry {
  int vertex = 0;
  Var var = Var::Position;
  // Rows [0, dim) hold d(residual)/d(variable of `vertex`).
  Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
};

// One residual group (per vertex, directed edge, or triangle). Inactive
// groups are pruned or gated out and contribute exactly zero everywhere.
struct ResidualBlock {
  Eigen::Vector3d r = Eigen::Vector3d::Zero();  // rows [0, dim) used
  JacEntry jac[3];
  int n_jac = 0;
  bool active = false;
  // Term-specific gate signature; lets tests detect gate flips between
  // nearby states.
  std::uint32_t gate_tag = 0;
};

struct TermEvaluation {
  int residual_dim = 3;
  std::vector<ResidualBlock> blocks;  // one per element, stable order

  double energy() const;    // sum of squared residual norms over active blocks
  int active_count() const;
};

// E_Photo: per-vertex color residual against the smoothed frame, pruned
// when the projection leaves the frame, the depth is invalid, or the
// per-channel max exceeds sigma_color_threshold.
TermEvaluation residuals_photo(const DeformState& state, const TemplateMesh& mesh,
                               const ImageRGB& frame_smoothed, const Intrinsics& K,
                               double sigma_color_threshold);

// E_Smooth: (V_i - V_j) - (Vhat_i - Vhat_j) per directed edge.
TermEvaluation residuals_smooth(const DeformState& state, const TemplateMesh& mesh);

// E_Edge: ||V_i - V_j|| - ||Vhat_i - Vhat_j|| per directed edge.
TermEvaluation residuals_edge(const DeformState& state, const TemplateMesh& mesh);

// E_Arap: (V_i - V_j) - R(Phi_i) (Vhat_i - Vhat_j) per directed edge.
TermEvaluation residuals_arap(const DeformState& state, const TemplateMesh& mesh);

// E_Vel: V_i - V_i^t.
TermEvaluation residuals_velocity(const DeformState& state);

// E_Acc: (V_i - V_i^t) - (V_i^t - V_i^{t-1}).
TermEvaluation residuals_acceleration(const DeformState& state);

// Texture-map dominant gradients per triangle, encoded as barycentric
// weights of the point z_TM + d_TM plus the UV-space center.
struct TriangleDfgTable {
  Eigen::MatrixX3d barycentric;  // B, valid rows sum to 1
  Eigen::MatrixX2d uv_center;    // z_TM
  std::vector<std::uint8_t> valid;

  int valid_count() const;
};

TriangleDfgTable precompute_texture_dfg(const TemplateMesh& mesh,
                                        const HogParams& hog);

// E_Tex: compares the projected mesh DFG (unit-normalized) against the
// frame's DFG at the projected triangle center, resolving the +/- sign
// ambiguity by the smaller Euclidean difference and gating on pattern
// presence and angular similarity.
TermEvaluation residuals_texture(const DeformState& state, const TemplateMesh& mesh,
                                 const TriangleDfgTable& table,
                                 const OrientationField& field, const Intrinsics& K,
                                 double rho_angle_threshold_deg);

enum TermId {
  kPhoto = 0, kSmooth, kEdge, kArap, kVel, kAcc, kTex, kNumTerms
};

extern const char* const kTermNames[kNumTerms];

// Everything a full energy evaluation needs. Pointers may be null for
// disabled terms (photo needs frame_smoothed; texture needs field + dfg).
struct EvalInputs {
  const TemplateMesh* mesh = nullptr;
  const ImageRGB* frame_smoothed = nullptr;
  const OrientationField* field = nullptr;
  const TriangleDfgTable* dfg = nullptr;
  Intrinsics intrinsics;
  EnergyWeights weights;
  bool acceleration_enabled = true;
};

struct EvaluationSet {
  TermEvaluation terms[kNumTerms];
};

struct EnergyBreakdown {
  double term[kNumTerms] = {0, 0, 0, 0, 0, 0, 0};
  double total = 0.0;
};

// Evaluates every enabled term at the given state. A term is enabled when
// its weight is positive and its inputs are present.
EvaluationSet evaluate_all(const DeformState& state, const EvalInputs& inputs);

EnergyBreakdown total_energy(const EvaluationSet& evals, const EnergyWeights& weights);

// Convenience: evaluate_all + total_energy.
EnergyBreakdown total_energy(const DeformState& state, const EvalInputs& inputs);

}  // namespace surftrack
