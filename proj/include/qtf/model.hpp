#pragma once

#include <limits>

#include "qtf/field.hpp"
#include "qtf/pointwise.hpp"

namespace qtf {

struct ModelParams {
    double a = 0.0;
    double b = 0.0;
    double c = 1.0;
    double L = 1.0;
    double Gamma = 1.0;
    double nu = 1.0;
    double lambda = 1.0;
    double xi = 0.0;
    int d_target = 2;
    // smallness threshold for |xi|; advisory only (default: no restriction)
    double xi0_threshold = std::numeric_limits<double>::infinity();

    void validate() const;
    bool xi_within_threshold() const { return std::abs(xi) <= xi0_threshold; }
};

// Symmetric/antisymmetric parts of grad u, indices (alpha,beta) with
// u_{a,b} = d_b u_a; Omega_{ab} = (d_b u_a - d_a u_b)/2.
struct StrainRotation {
    Field D;
    Field Omega;
};

StrainRotation strain_rotation(const Field& u);

// F(Q) = -aQ + b[Q^2 - tr(Q^2)/d Id] - cQ tr(Q^2), formed in physical space
// with dealiasing per product stage.
Field bulk_force(const Field& Q, const ModelParams& p);

// H = L Laplacian(Q) + F(Q)
Field molecular_field(const Field& Q, const ModelParams& p);

// S(grad u, Q) = (xi D + Om)(Q + Id/d) + (Q + Id/d)(xi D - Om)
//                - 2 xi (Q + Id/d) tr(Q grad u)
Field alignment(const StrainRotation& gradu, const Field& Q, const ModelParams& p);

// tau = -xi (Q+Id/d) H - xi H (Q+Id/d) + 2 xi (Q+Id/d) tr(QH)
//       - L gradQ (.) gradQ      with ((.))_{ij} = Q_{ab,i} Q_{ab,j}
Field stress_tau(const Field& Q, const Field& H, const Field& gradQ,
                 const ModelParams& p);

// sigma = QH - HQ
Field stress_sigma(const Field& Q, const Field& H);

double free_energy(const Field& Q, const ModelParams& p);
double kinetic_energy(const Field& u);
// E = kinetic + lambda * free energy (the Lyapunov functional)
double total_energy(const Field& Q, const Field& u, const ModelParams& p);

struct DissipationRate {
    double viscous;     // nu |grad u|_L2^2
    double rotational;  // Gamma lambda |H|_L2^2
};
DissipationRate dissipation_rate(const Field& Q, const Field& u,
                                 const ModelParams& p);

// Smallest shift M (1-d search over sampled Q-tensors) making
//   M/2 tr(Q^2) + c/8 tr^2(Q^2) <= (M + a/2) tr(Q^2) - b/3 tr(Q^3) + c/4 tr^2(Q^2)
// hold on the sample; used for the shifted energy monitor E + M|Q|^2.
double choose_shift_M(const ModelParams& p);

// Projection onto symmetric trace-free matrices (exact, linear).
Field symmetrize_tracefree(const Field& Q);

// max_k |tr Q| type defects, relative to |Q|; diagnostics for invariants
double trace_defect(const Field& Q);
double symmetry_defect(const Field& Q);
double divergence_defect(const Field& u);

}  // namespace qtf
