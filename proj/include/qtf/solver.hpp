#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtf/field.hpp"
#include "qtf/model.hpp"

namespace qtf {

struct Regularization {
    bool enabled = false;
    int n = 1;        // J_n cutoff exponent
    double eps = 1.0; // mollifier width and epsilon-term coefficient
};

enum class Scheme { imex1, imex2 };

struct StepperConfig {
    double dt = 1e-3;
    Scheme scheme = Scheme::imex2;
    Regularization reg;
    double t_final = 1.0;
    int cadence = 1;  // diagnostics every this many steps
    // fold -a Q into the per-mode implicit factor when a > 0
    bool implicit_bulk_a = false;

    void validate() const;
};

struct SimState {
    double t = 0.0;
    Field Q;
    Field u;
};

// Explicit (non-stiff) parts of the right-hand sides; the stiff mode-diagonal
// pieces Gamma L Lap Q and nu Lap u are handled by the integrating factor.
// rhs_Q / rhs_u return the full tendencies including the stiff part.
Field rhs_Q(const SimState& state, const ModelParams& p, const Regularization& reg);
Field rhs_u(const SimState& state, const ModelParams& p, const Regularization& reg);

// The two eps-weighted stabilizer terms of the regularized momentum
// equation, Leray-projected:
//   - eps P Jn R_eps( sum_lm grad Q_lm (R_eps u . grad Q_lm) |R_eps u grad Q| )
//   + eps P div Jn R_eps( grad(R_eps u) |grad(R_eps u)|^2 )
// Pairing against a banded zero-mean divergence-free u yields exactly
//   - eps ( int |R_eps u . grad Q|^3 + int |grad R_eps u|^4 ).
// Returns the zero field when regularization is disabled.
Field epsilon_stabilizers(const SimState& state, const ModelParams& p,
                          const Regularization& reg);

// Pressure is never part of the state (the projection absorbs it); this
// recovers it on demand from the unprojected tendency N via
// p_hat = i k . N_hat / |k|^2, so that rhs_u == N + grad(p).
Field pressure_field(const SimState& state, const ModelParams& p,
                     const Regularization& reg);

class SolverAbort : public std::runtime_error {
public:
    SolverAbort(long step, const std::string& what)
        : std::runtime_error(what), step_index(step) {}
    long step_index;
};

SimState step(const SimState& state, const ModelParams& p,
              const StepperConfig& cfg);

struct DiagnosticsRow {
    double t = 0;
    double energy = 0;       // E(t)
    double kinetic = 0;
    double free_energy = 0;
    double visc = 0;         // nu |grad u|^2
    double rot = 0;          // Gamma lambda |H|^2
    double residual = 0;     // [E(t+)-E(t)]/dt + trapezoid(visc+rot)
    double h1_Q = 0;
    double l2_u = 0;
    double max_u = 0;
    double shifted_energy = 0;  // E + M |Q|^2
    bool cfl_flag = false;
    // extra monitored quantities (not part of the diagnostics CSV)
    double l2_Q = 0;
    double grad_Q = 0;
    double l4_Q = 0;
    double l6_Q = 0;
};

struct RunSummary {
    std::vector<DiagnosticsRow> rows;
    long steps = 0;
    double shift_M = 0.0;
};

using DiagnosticsSink = std::function<void(const DiagnosticsRow&)>;
using SnapshotSink = std::function<void(const SimState&)>;

RunSummary run(SimState state, const ModelParams& p, const StepperConfig& cfg,
               const DiagnosticsSink& sink = {}, const SnapshotSink& snap = {});

struct TwinRow {
    double t = 0;
    double phi = 0;        // (2 lambda)^-1 |du|_{H^-1/2}^2 + L |grad dQ|_{H^-1/2}^2
    double dphi_dt = 0;    // forward difference, assigned to the left endpoint
    double mu_phi = 0;
    double chi_emp = 0;    // max(0, dphi_dt) / mu(phi) with underflow floor
    double diss_u = 0;     // (nu/lambda) |grad du|_{H^-1/2}^2
    double diss_Q = 0;     // Gamma L^2 |lap dQ|_{H^-1/2}^2
    double n_t = 0;        // ceil(ln(1+e+1/phi))
};

struct TwinSummary {
    std::vector<TwinRow> rows;
    long steps = 0;
};

TwinSummary twin_run(SimState a, SimState b, const ModelParams& p,
                     const StepperConfig& cfg);

}  // namespace qtf
