// Dimensionless Gaussian phase-space kernel: symplectic algebra, displacement
// composition, matrix exponentials, characteristic/Wigner evaluation, and a
// fine-step numerical evolution oracle.
//
// Units are fully dimensionless: hbar = 1, time in trap-frequency units,
// positions in sqrt(2)*x0 units and momenta in hbar/(sqrt(2)*x0) units, so a
// coherent state has identity covariance.
//
// Convention note. Two maps appear throughout:
//   * symplectic_segment / matrix_exp_symplectic return S = exp(-t Omega H),
//     the transform whose four-segment product closes the interferometer
//     (S_tot = -1). Its inverse exp(+t Omega H) is the map that acts directly
//     on moments, r(t) = S^{-1} r(0).
//   * segment_forward and every GaussianUnitary store the forward moment map.
// Round-trip tests pin both conventions.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <vector>

namespace catlift::ps {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class SegmentKind { Qho, Iho };

enum class HamiltonianKind { Qho, Iho, QhoForce, IhoForce, GravQho, GravIho };

// Block-diagonal symplectic form, [[0,1],[-1,0]] per mode.
Mat symplectic_form(int modes);

struct SymplecticTransform {
    Mat m;

    int modes() const { return static_cast<int>(m.rows()) / 2; }
    static SymplecticTransform identity(int modes);

    // max-abs entry of S Omega S^T - Omega
    double symplectic_defect() const;
    double det_defect() const;
    bool is_symplectic(double tol = 1e-12) const;

    // Exact group inverse -Omega S^T Omega (no factorization).
    SymplecticTransform inverse() const;
};

struct CovarianceMatrix {
    Mat m;

    double symmetry_defect() const;
    // Smallest eigenvalue of sigma + i Omega; >= -tol is the uncertainty
    // relation for a physical state.
    double min_uncertainty_eigenvalue() const;
    // Symplectic spectrum (moduli of the eigenvalues of i Omega sigma, one
    // per mode, >= 1 for physical states; all 1 for pure Gaussian states).
    std::vector<double> symplectic_eigenvalues() const;
    // Throws std::invalid_argument when symmetry or uncertainty fails.
    void validate(double sym_tol = 1e-12, double psd_tol = 1e-10) const;
};

struct QuadraticHamiltonian {
    Mat h;                        // symmetric, in units of hbar*omega
    Vec linear;                   // coefficient vector of the linear term
    HamiltonianKind kind = HamiltonianKind::Qho;

    // Equilibrium point -H^{-1} linear (throws when H is singular).
    Vec equilibrium() const;
};

// One-mode Hamiltonian builders. The optional drive g adds a -g*x term.
QuadraticHamiltonian hamiltonian_qho(double g = 0.0);
QuadraticHamiltonian hamiltonian_iho(double g = 0.0);

// Inverted potential with a mismatched frequency omega_I: the expansion rate
// scales with the ratio omega_I/omega. Hook for hardware where the inverted
// trap cannot match the harmonic one; the standard protocol uses ratio 1.
QuadraticHamiltonian hamiltonian_iho_scaled(double freq_ratio, double g = 0.0);

// Displacement-plus-symplectic normal form U = D_{r_tot} S_tot. The
// symplectic member is the forward moment map; `displacement` shifts
// moments by +displacement after the symplectic action.
struct GaussianUnitary {
    Vec displacement;
    SymplecticTransform symplectic;
    std::optional<double> phase;  // overall phase; untracked by default

    static GaussianUnitary identity(int modes);
};

// S = exp(-t Omega H) for the labeled one-mode kinds:
//   QHO: [[cos t, -sin t], [sin t, cos t]]
//   IHO: [[cosh t, -sinh t], [-sinh t, cosh t]]
// Throws on negative t.
SymplecticTransform symplectic_segment(SegmentKind kind, double t);

// Forward moment map exp(+t Omega H) of the same segment.
SymplecticTransform segment_forward(SegmentKind kind, double t);

// Right-to-left matrix product of a time-ordered list (first element acts
// first). Empty list gives the identity (modes from `modes_if_empty`).
SymplecticTransform compose(std::span<const SymplecticTransform> transforms,
                            int modes_if_empty = 1);

// exp(-t Omega H): closed form for labeled one-mode QHO/IHO, scaling-and-
// squaring otherwise (accuracy target 1e-13). Requires symmetric H.
SymplecticTransform matrix_exp_symplectic(const QuadraticHamiltonian& h, double t);

// r' = S r, sigma' = S sigma S^T for a caller-supplied forward map.
std::pair<Vec, Mat> evolve_gaussian(const Vec& r, const Mat& sigma,
                                    const SymplecticTransform& s);

// D_{r1} D_{r2} = e^{i phase} D_{r1+r2} with phase = -1/2 r1^T Omega r2.
std::pair<Vec, double> displacement_compose(const Vec& r1, const Vec& r2);

// Normal form of a time-ordered product of Gaussian unitaries
// (first element acts first): S_tot = S_n ... S_1,
// d_tot = d_n + S_n d_{n-1} + ... The overall phase is accumulated only
// when every input carries one.
GaussianUnitary gaussian_unitary_compose(std::span<const GaussianUnitary> segments);

// chi(rbar) = exp(-1/4 rbar^T Omega^T sigma Omega rbar + i rbar^T Omega^T r)
std::complex<double> characteristic_fn(const Vec& r, const Mat& sigma, const Vec& rbar);

// Unit-normalized Gaussian Wigner function,
//   W(rbar) = exp(-(rbar-r)^T sigma^{-1} (rbar-r)) / (pi^n sqrt(det sigma)).
double wigner_fn(const Vec& r, const Mat& sigma, const Vec& rbar);

// Equal-weight branch mixture used for the full cat, (W_+ + W_-)/2.
double wigner_cat(const Vec& r_plus, const Mat& sigma_plus,
                  const Vec& r_minus, const Mat& sigma_minus, const Vec& rbar);

// One-mode moments in characteristic-function (Weyl) semantics; the Delta
// symbols of the closed forms are covariance-matrix entries.
struct FourthMoments {
    double x3;        // <x^3>
    double x4;        // <x^4>
    double p4;        // <p^4>
    double xxpp_sym;  // <x^2 p^2 + p^2 x^2> as the chi cross-derivative
};
FourthMoments higher_moments(const Vec& r, const Mat& sigma);

// ---- piecewise schedules -------------------------------------------------

struct ScheduleSegment {
    SegmentKind kind;
    double duration;
};

// [QHO pi/2, IHO t_minus, QHO pi/2, IHO t_minus]
std::vector<ScheduleSegment> expansion_schedule(double t_minus);

// Forward moment map of a labeled schedule, composed in extended precision
// and rounded once at the end.
SymplecticTransform schedule_transform(std::span<const ScheduleSegment> schedule);

// Forward map from protocol start up to time t (clamped to the schedule
// span; throws when t is negative or past the end).
SymplecticTransform schedule_prefix_transform(std::span<const ScheduleSegment> schedule,
                                              double t);

// Normal form of the schedule with a constant linear drive -g*x added to
// every segment, composed in extended precision. Phase untracked.
GaussianUnitary schedule_force_unitary(std::span<const ScheduleSegment> schedule,
                                       double g);

// ---- fine-step numerical oracle -------------------------------------------

struct HamiltonianSegment {
    QuadraticHamiltonian h;
    double duration;
};

struct OracleTrajectory {
    std::vector<double> times;
    std::vector<Vec> moments;
    std::vector<Mat> covariances;

    const Vec& final_moments() const { return moments.back(); }
    const Mat& final_covariance() const { return covariances.back(); }
};

// Fine-step evolution using per-step closed-form affine maps with
// h = duration/steps per segment. Exact for piecewise-constant schedules;
// O(h^2) for time-varying cross-checks.
OracleTrajectory evolve_numeric_oracle(std::span<const HamiltonianSegment> schedule,
                                       const Vec& r0, const Mat& sigma0, int steps);

}  // namespace catlift::ps
