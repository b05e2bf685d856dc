#pragma once

#include <vector>

#include "qtf/field.hpp"

namespace qtf {

// Homogeneous dyadic decomposition built from a fixed smooth radial profile:
// chi == 1 on [0,1/2], 0 on [1,inf), exp-bump smoothstep in between, and
// phi(rho) = chi(rho/2) - chi(rho) supported in the ring [1/2, 2].
//
// On the torus the shell range [q_min, q_max] is chosen so the homogeneous
// partition sum_q phi(2^-q |k|) telescopes to exactly 1 on every retained
// nonzero wavenumber. Profile v1; frozen so measured constants stay
// reproducible.
class DyadicDecomposition {
public:
    explicit DyadicDecomposition(GridPtr grid);

    const GridPtr& grid() const { return grid_; }
    int q_min() const { return q_min_; }
    int q_max() const { return q_max_; }

    static double chi(double rho);
    static double phi(double rho) { return chi(rho / 2.0) - chi(rho); }

    // homogeneous blocks; valid for any integer q
    Field block(const Field& f, int q) const;    // \dot Delta_q
    Field lowpass(const Field& f, int q) const;  // \dot S_q

    // max over retained modes of |chi(k) + sum_{q>=0} phi(2^-q k) - 1|
    double partition_defect() const;
    // max over retained nonzero modes of |sum_{q in range} phi(2^-q k) - 1|
    double homogeneous_defect() const;
    // max over retained modes of |phi_q * phi_p| for |p-q| >= 5
    double support_overlap(int p, int q) const;

private:
    GridPtr grid_;
    int q_min_;
    int q_max_;
};

// L^p norm by physical-space quadrature of the pointwise Frobenius norm;
// p = inf gives the grid max (a lower bound on the true sup).
double lp_norm(const Field& f, double p);

// Homogeneous Sobolev norm, direct multiplier backend (k = 0 dropped).
double sobolev_norm_direct(const Field& f, double s);
// Nonhomogeneous variant: multiplier (1 + |k|^2)^s over all modes.
double sobolev_norm_nonhom_direct(const Field& f, double s);
// Dyadic-sum backend over the decomposition's shell range.
double sobolev_norm_dyadic(const Field& f, double s,
                           const DyadicDecomposition& dd);
// Nonhomogeneous H^s: |S_0 f|_L2 + shells q >= 0.
double sobolev_norm_nonhom_dyadic(const Field& f, double s,
                                  const DyadicDecomposition& dd);

// <A,B> in homogeneous H^s: V sum_{k!=0} |k|^{2s} Re(A : conj(B)).
double sobolev_pairing(const Field& a, const Field& b, double s);

struct BesovIndex {
    double s = 0.0;
    double p = 2.0;  // use infinity() for L^inf
    double r = 2.0;
    bool homogeneous = true;
};

double besov_norm(const Field& f, const BesovIndex& idx,
                  const DyadicDecomposition& dd);
// low-frequency characterization: l^r of 2^{qs} |S_q f|_{L^p}; requires s<0.
// The q -> +inf tail where S_q == identity is summed in closed form.
double besov_lowpass_characterization(const Field& f, const BesovIndex& idx,
                                      const DyadicDecomposition& dd);

struct BonyParts {
    Field low_high;   // T_a b
    Field high_low;   // T_b a
    Field resonant;   // R(a,b) (+ the zero-mode pair on the torus)
};
// Scalar paraproduct decomposition; the three parts sum to the dealiased
// product a*b.
BonyParts bony_decompose(const Field& a, const Field& b,
                         const DyadicDecomposition& dd);

struct JqParts {
    Field j1, j2, j3, j4;
};
// Product decomposition of Delta_q(AB) for matrix fields A, B:
//   J1 = sum_{|q-q'|<=5} [Delta_q, S_{q'-1}A] Delta_{q'} B
//   J2 = sum_{|q-q'|<=5} (S_{q'-1}A - S_{q-1}A) Delta_q Delta_{q'} B
//   J3 = S_{q-1}A Delta_q B
//   J4 = sum_{q'>=q-5} Delta_q(Delta_{q'}A S_{q'+2}B)
JqParts jq_decompose(const Field& A, const Field& B, int q,
                     const DyadicDecomposition& dd);

// [Delta_q, u] v = Delta_q(uv) - u Delta_q v for scalar fields
Field commutator(int q, const Field& u, const Field& v,
                 const DyadicDecomposition& dd);

}  // namespace qtf
