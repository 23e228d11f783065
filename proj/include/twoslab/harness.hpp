#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "twoslab/basis.hpp"
#include "twoslab/bilayer2d.hpp"
#include "twoslab/core.hpp"
#include "twoslab/eigensolver.hpp"
#include "twoslab/evolve.hpp"
#include "twoslab/spectral.hpp"

namespace twoslab {

/// Portable seeded generator: std::mt19937_64 with per-task streams whose
/// seeds come from splitmix64, and 53-bit uniform doubles built by hand so
/// results do not depend on the standard library's distributions.
class Rng {
public:
    static constexpr const char* kName = "mt19937_64+splitmix64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Seed of stream `stream` derived from a master seed.
    static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream);

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

private:
    std::mt19937_64 engine_;
};

struct NoiseReport {
    double norm_b{};  ///< trapezoid L2 norm of the left perturbation
    double norm_a{};
    double scale{1.0};  ///< factor applied to fit the budget
};

/// Adds eps*rand(x_j), rand uniform in [-bound, bound]. If the two slab
/// norms of the perturbation sum to more than eps the draw is scaled down to
/// fit.
SampledField inject_noise(const SampledField& field, double epsilon, double bound,
                          std::uint64_t seed, NoiseReport* report = nullptr);

struct RunConfig {
    SlabSystem system;
    std::vector<double> epsilons{1e-2, 1e-4, 1e-6};
    double beta = 0.05;
    double gamma = 0.5;
    std::size_t grid_points = 20;
    std::uint64_t seed = 20240917;
    NodePolicy policy = NodePolicy::least_squares;
    std::string output_dir = "out";
    double Q = 5.0;
    double sigma = 1e-3;
    std::size_t unregularized_modes = 50;
    std::size_t surface_times = 11;
    double y0 = 0.0;
    std::size_t eigen_count = 50;
    std::vector<double> table_positions{-5.0, -2.63, 1.42, 3.0};

    /// Copper/molybdenum slabs b=5, a=3 on [0, 0.1] with eps in {1e-2, 1e-4, 1e-6}.
    static RunConfig defaults_1d();
    /// Copper/molybdenum unit-square bilayer, beta=0.01, gamma=1.
    static RunConfig defaults_2d();

    void validate() const;
    RegParams reg(double epsilon) const { return RegParams{epsilon, beta, gamma}; }
};

/// Overrides `base` with the keys of a JSON document. Unknown keys raise
/// ValidationError.
RunConfig parse_config(const std::string& json_text, const RunConfig& base);
RunConfig load_config(const std::string& path, const RunConfig& base);
std::string config_to_json(const RunConfig& cfg);

/// "1e-2" for powers of ten, shortest round-trip form otherwise.
std::string epsilon_label(double epsilon);

struct ResultTable {
    std::vector<std::string> columns;  ///< epsilon labels
    bool has_exact{};
    struct Row {
        double x{};
        std::vector<double> values;
        double exact{};
    };
    std::vector<Row> rows;
};

/// CSV text of a table: header "x,eps_<label>...[,exact]"; cells with five
/// fractional digits, switching to scientific notation below 1e-4.
std::string format_table(const ResultTable& table);
void emit_table(const ResultTable& table, const std::string& path);
ResultTable parse_table(const std::string& csv_text);

/// One (x,t,value) sample of a reconstructed surface.
using SurfacePoint = std::array<double, 3>;

struct ExampleResult {
    std::string name;
    RunConfig config;
    std::vector<double> n_eps;
    std::vector<std::size_t> mode_counts;
    SampledField exact;  ///< known initial data on the grid
    std::vector<SampledField> measured;
    std::vector<SampledField> reconstructions;
    std::vector<double> l2_errors;
    ResultTable table;
    std::vector<BoundCheck> bounds;
    std::vector<SurfacePoint> surface;
    std::vector<EigenValuePair> eigenvalues;
    std::vector<Mode2D> modes2d;
    SampledField unregularized;
    std::map<std::string, double> metrics;

    bool bounds_hold() const;
};

ExampleResult run_example1(const RunConfig& cfg);
ExampleResult run_example2(const RunConfig& cfg);
ExampleResult run_example3(const RunConfig& cfg);
ExampleResult run_example2d(const RunConfig& cfg);

/// Seeded random trials of the instability, stability and noise-gap bounds
/// in the copper/molybdenum and unit systems at t0 and the midpoint.
std::vector<BoundCheck> run_bound_suite(std::uint64_t seed, std::size_t trials);

/// Table rows: the grid node nearest each position (x < 0 left, else right).
ResultTable make_table(const std::vector<double>& positions, const std::vector<double>& epsilons,
                       const std::vector<SampledField>& fields,
                       const std::optional<SampledField>& exact);

std::string eigenvalues_csv(const std::vector<EigenValuePair>& pairs);
std::string reconstruction_csv(const ExampleResult& r);
/// Same layout with |value| columns, for log-scale plots.
std::string magnitude_csv(const ExampleResult& r);
std::string surface_csv(const std::vector<SurfacePoint>& points);
std::string bounds_csv(const std::vector<BoundCheck>& checks);
std::string modes2d_csv(const std::vector<Mode2D>& modes);
/// "slab,x,value" rows.
std::string field_csv(const SampledField& field);
SampledField parse_field_csv(const std::string& csv_text, double time);
std::string metadata_json(const ExampleResult& r);

/// Writes every artifact of a run into `dir` (created if missing).
void write_example(const ExampleResult& r, const std::string& dir);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace twoslab
