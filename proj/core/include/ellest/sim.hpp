#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellest/estimator.hpp"
#include "ellest/robust_tests.hpp"
#include "ellest/scenario.hpp"

namespace ellest {

inline constexpr int kFormatVersion = 1;

struct ReplicationRow {
  std::size_t rep = 0;
  std::size_t chosen = 0;
  // Candidate parameter (location, theta) or NaN when the model has none.
  double param = 0.0;
  // Aggregate loss to the true marginals divided by n.
  double loss = 0.0;
  double sup_stat = 0.0;
  std::size_t minimizer_count = 0;
  // Loss of the chosen candidate to the empirical measure (include_empirical).
  std::optional<double> loss_to_empirical;
  double runtime_ms = 0.0;  // not part of the record files unless timing is asked for
};

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double q90 = 0.0;
  double min = 0.0;
  double max = 0.0;
};
// Type-7 quantiles of the values.
Summary summarize(std::vector<double> values);

struct ExperimentRecord {
  std::string digest;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t candidates = 0;
  double resolution = 0.0;
  // min over the model of the loss to the truth (per observation).
  double min_model_loss = 0.0;
  std::vector<ReplicationRow> rows;  // sorted by rep
  Summary loss_summary;
};

// Replication k draws from Rng(seed, k); results do not depend on threads.
ExperimentRecord run_estimation(const Scenario& s, int threads = 1);

enum class DeviationBound { kAuto, kWasserstein, kVcTv, kL2 };

struct DeviationRow {
  double xi = 0.0;
  double bound = 0.0;
  double frequency = 0.0;  // of {loss <= bound}
  double target = 0.0;     // 1 - exp(-xi)
  // target - 3 sqrt(target (1 - target) / reps)
  double lower_limit = 0.0;
};
struct DeviationTable {
  ExperimentRecord record;
  std::vector<DeviationRow> rows;
};
// kAuto picks the W bound for W, the VC bound for TV and the L2 bound for L_2.
DeviationTable deviation_frequency(const Scenario& s, const std::vector<double>& xis,
                                   DeviationBound which = DeviationBound::kAuto, int threads = 1);

struct RatePoint {
  std::size_t n = 0;
  double median_loss = 0.0;
  double mean_loss = 0.0;
  double grid_step = 0.0;
  std::size_t candidates = 0;
};
struct RateCurve {
  std::vector<RatePoint> points;
  double slope = 0.0;  // least-squares slope of log median loss on log n
};
// For each n the model grid is scaled by (ns[0]/n)^grid_exponent around its
// centre, so that it stays fine relative to the estimation error.
RateCurve rate_curve(const Scenario& s, const std::vector<std::size_t>& ns, double grid_exponent = 0.0,
                     int threads = 1);
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct TestErrorReport {
  std::size_t reps = 0;
  std::size_t errors = 0;  // decisions for the farther candidate, ties included
  std::size_t ties = 0;
  // errors / reps; NaN when neither candidate is closer.
  double empirical_error = 0.0;
  double loss_star_p = 0.0;  // per observation
  double loss_star_q = 0.0;
  // gamma for the closer candidate; >= 1 means no guarantee.
  double gamma = 0.0;
  bool p_is_closer = true;
  bool defined = true;
  double bound_hoeffding = 1.0;
  std::optional<double> bound_bernstein;
  std::optional<double> a2;
  std::optional<HellingerBound> bound_hellinger;
  // Binomial standard deviation of the frequency at the given bound.
  static double sigma(double bound, std::size_t reps);
};
TestErrorReport test_error_mc(const Measure& truth, const Measure& p, const Measure& q, const LossSpec& spec,
                              std::size_t n, std::size_t reps, std::uint64_t seed, int threads = 1);

struct AgreementReport {
  std::size_t reps = 0;
  std::size_t agree = 0;
  std::size_t disagree = 0;
};
// How often the TV test and the Devroye-Lugosi test reach the same decision
// (ties of the TV test count as choosing P).
AgreementReport compare_with_devroye_lugosi(const Measure& truth, const Measure& p, const Measure& q,
                                            std::size_t n, std::size_t reps, std::uint64_t seed, int threads = 1);

// Output files. Names are <digest>_<seed>_<kind>.
std::string records_file_name(const ExperimentRecord& r);
std::string summary_file_name(const ExperimentRecord& r);
void write_records_csv(const ExperimentRecord& r, const std::string& path, bool timing = false);
void write_records_jsonl(const ExperimentRecord& r, const std::string& path, bool timing = false);
void write_summary_json(const ExperimentRecord& r, const std::string& path,
                        const nlohmann::json& extra = nlohmann::json::object());
void write_curve_csv(const RateCurve& c, const std::string& path);
void write_deviation_csv(const DeviationTable& t, const std::string& path);

// Fixed 17 significant digit rendering shared by all writers.
std::string format_number(double x);

}  // namespace ellest
