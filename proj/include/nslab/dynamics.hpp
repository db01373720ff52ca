#pragma once

// Barotropic Navier-Stokes in the frame xi = x - sigma t,
//   v_t - sigma v_xi - u_xi = 0,
//   u_t - sigma u_xi + p(v)_xi = (mu u_xi / v)_xi,
// co-integrated with the shift ODE X' = -(M/delta)(Y1 + Y2).

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nslab/grid.hpp"
#include "nslab/profile.hpp"

namespace nslab {

enum class PerturbationShape { zero, gaussian_bump, compact_bump };

std::string to_string(PerturbationShape s);
PerturbationShape perturbation_shape_from_string(const std::string& s);

struct PerturbationSpec {
  PerturbationShape shape = PerturbationShape::zero;
  double amplitude_v = 0.0;
  double amplitude_u = 0.0;
  double center = 0.0;
  double width = 1.0;

  /// Unit-amplitude bump value at x.
  double bump(double x) const;
  bool operator==(const PerturbationSpec&) const = default;
};

struct InitialData {
  SimState state;
  /// ||v0 - v_tilde||_H1 + ||u0 - u_tilde||_H1, trapezoidal with central differences.
  double epsilon_report = 0.0;
};

/// Profile plus perturbation on the grid, X(0) = 0. Throws InvalidShock-free
/// UsageError when the perturbation does not vanish (< 1e-12) at the window
/// edges, and VacuumError when it drives v <= 0.
InitialData initial_data(const ShockProfile& profile, const PerturbationSpec& spec,
                         const SimGrid& grid);

/// The two shift integrals Y1 and Y2 by the trapezoidal rule on the grid.
struct ShiftIntegrals {
  double y1 = 0.0;
  double y2 = 0.0;
};
ShiftIntegrals shift_integrals(std::span<const double> u, double X,
                               const ShockProfile& profile, const SimGrid& grid);

/// X' = -(M/delta)(Y1 + Y2).
double shift_rate(const SimState& state, const ShockProfile& profile, const SimGrid& grid);
double shift_rate(const ShiftIntegrals& y, const ShockProfile& profile);

/// dt = cfl * dx / (sigma + max sqrt(-p'(v))); with explicit diffusion also
/// bounded by 0.5 dx^2 min(v) / mu.
double cfl_dt(const SimState& state, const SimGrid& grid, const ModelParams& m,
              double sigma, double cfl_number, bool implicit_diffusion = true);

struct StepReport {
  /// Time integral over the step of the v-flux difference F(N-1/2) - F(1/2).
  double boundary_flux = 0.0;
  /// dx * sum over interior nodes of (v_new - v_old).
  double mass_change = 0.0;
  double conservation_residual() const;
};

/// One Strang-split step: half Crank-Nicolson diffusion, SSP-RK3 for the
/// hyperbolic part (central fluxes) together with X, half diffusion.
/// The sampled profile is an exact discrete steady state: the discrete
/// residual of the unperturbed profile is subtracted from the u equation.
class FrameStepper {
 public:
  FrameStepper(std::shared_ptr<const ShockProfile> profile, SimGrid grid);

  StepReport advance(SimState& state, double dt) const;

  const SimGrid& grid() const { return grid_; }
  const ShockProfile& profile() const { return *profile_; }
  /// Largest magnitude of the u-equation balancing terms.
  double max_balance_source() const;

 private:
  void hyperbolic_rhs(std::span<const double> v, std::span<const double> u,
                      std::span<double> dv, std::span<double> du, double& flux_diff) const;
  void diffuse(std::span<const double> v, std::span<double> u, double tau) const;

  std::shared_ptr<const ShockProfile> profile_;
  SimGrid grid_;
  std::vector<double> source_hyp_;
  std::vector<double> source_diff_;
  // Fourth-difference damping of v - v_tilde. Central differences leave the
  // 2dx mode of v undamped (v carries no viscosity), so a wave meeting a
  // Dirichlet edge can otherwise shed a sawtooth that never decays.
  std::vector<double> base_v_;
  double damping_ = 0.0;
};

}  // namespace nslab
