#pragma once

#include <span>
#include <string>
#include <vector>

#include "nefrac/geometry.hpp"

namespace nefrac {

struct DiscreteFunction {
    int level = 0;
    std::vector<double> values;  // indexed by vertex id of V_level
};

// Representation of the renormalization fixed point. The orbit-class
// pairwise family is exactly invariant under the trace only for p = 2; the
// hub and angular backends cover the tree-like and three-boundary-point
// cases where it is not.
enum class FormBackend { pairwise, hub, angular };

std::string to_string(FormBackend b);

// Symmetric p-energy on l(V_0) with the ordered double-sum convention
// (each unordered pair counts twice).
//   pairwise: 2 * sum_{pairs} w_class |u(x) - u(y)|^p
//   hub:      2 * w * min_h sum_i |u(i) - h|^p
//   angular:  |c|^p g(theta), (|c|, theta) polar on the zero-sum plane, |V_0| = 3
class EnergyForm {
  public:
    EnergyForm() = default;

    double exponent() const { return p_; }
    FormBackend backend() const { return backend_; }
    int boundary_size() const { return nb_; }

    // exact weights for the pairwise backend, least-squares shadow otherwise
    const std::vector<double>& class_weights() const { return class_weights_; }
    const std::vector<std::pair<int, int>>& pairs() const { return pairs_; }
    const std::vector<int>& pair_classes() const { return pair_class_; }

    double hub_weight() const { return hub_weight_; }
    const std::vector<double>& angular_table() const { return table_; }

    double eval(std::span<const double> u) const;
    void add_gradient(std::span<const double> u, double scale, std::span<double> grad) const;
    double hub_argmin(std::span<const double> u) const;

    static EnergyForm make_pairwise(const Fractal& f, double p, std::vector<double> class_weights);
    static EnergyForm make_hub(const Fractal& f, double p, double weight,
                               std::vector<double> shadow_weights = {});
    static EnergyForm make_angular(const Fractal& f, double p, std::vector<double> table,
                                   std::vector<double> shadow_weights = {});

  private:
    void rebuild_spline();

    double p_ = 2.0;
    int nb_ = 0;
    FormBackend backend_ = FormBackend::pairwise;
    std::vector<std::pair<int, int>> pairs_;
    std::vector<int> pair_class_;
    std::vector<double> class_weights_;
    double hub_weight_ = 0.0;
    std::vector<double> table_;   // angular backend: g at uniform angles
    std::vector<double> spline_;  // periodic cubic spline second derivatives
};

struct SolveDiagnostics {
    int pairwise_iterations = 0;
    double pairwise_fit_residual = 0.0;
    int angular_iterations = 0;
    double alt_init_s_delta = -1.0;  // negative when the comparison was skipped
};

struct ScalingFixedPoint {
    double s = 0.0;
    double sigma_sharp = 0.0;
    EnergyForm form;
    int iterations = 0;
    double residual = 0.0;  // sup |T E / (s E) - 1| over validation configurations
    SolveDiagnostics diagnostics;
};

struct FixedPointOptions {
    int max_iterations = 500;
    double weight_tol = 1e-10;     // orbit-class weight change at convergence
    double model_tol = 1e-8;       // pairwise fit residual accepted as exact
    double accept_tol = 1e-7;      // invariance residual required of any backend
    int angular_nodes = 3072;
    int angular_max_iterations = 300;
    bool compare_initializations = true;
};

// sigma_p^# = (log_rho s + alpha) / p, valid for s in (0,1)
double sigma_p_sharp(double s, double rho, double alpha, double p);

ScalingFixedPoint fixed_point_solve(const Fractal& f, double p,
                                    const FixedPointOptions& opts = {});

// E_n^(p): ordered double sum over cell vertex pairs at the graph level
double discrete_energy(const LevelGraph& g, const DiscreteFunction& u, double p);

// rho^{-n (p sigma - alpha)} E_n^(p)
double rescaled_energy(const Fractal& f, const DiscreteFunction& u, double p, double sigma);

// Lambda E(u) = (1/s) sum_i E(u o F_i) for u on V_1
double lambda_apply(const Fractal& f, const EnergyForm& form, double s, const DiscreteFunction& u);

// Lambda^n E(u) = (1/s^n) sum_{|w|=n} E(u o F_w)
double lambda_energy(const Fractal& f, const ScalingFixedPoint& fp, const DiscreteFunction& u);

// One-level energy-minimizing extension: boundary on V_{m-1} -> minimizer on V_m.
DiscreteFunction trace_min(const Fractal& f, const EnergyForm& form, double s,
                           const DiscreteFunction& boundary);

// Level-by-level p-harmonic extension to target_level.
DiscreteFunction p_harmonic_extension(const Fractal& f, const DiscreteFunction& boundary,
                                      int target_level, const ScalingFixedPoint& fp);

// Values of u on the coarser vertex set V_level (V_level is a subset of V_n).
DiscreteFunction restrict_to_level(const Fractal& f, const DiscreteFunction& u, int level);

struct PropertyEReport {
    std::vector<double> rescaled;  // E_j^sigma for j = 0..n
    double max_ratio = 1.0;        // max_j E_j / E_n
    double chain_constant = 1.0;   // E_0 / E_n
    bool degenerate = false;       // all energies zero
};

PropertyEReport property_e_report(const Fractal& f, const DiscreteFunction& u,
                                  const ScalingFixedPoint& fp, double sigma);

}  // namespace nefrac
