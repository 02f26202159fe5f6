#pragma once

// Prefractal convergence, null-field, hole-effect and formulation-gap runs.
// Every run is a pure function of its settings.

#include "screenbem/potentials.hpp"

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace screenbem {

struct ExperimentSettings {
    Problem problem = Problem::Soft;
    double k = 5.0;
    IncidentField field;
    QuadratureSpec quad;
    // Mesh size h = h_factor * feature size unless h > 0 is given.
    double h_factor = 0.5;
    double h = 0.0;
    std::size_t max_dofs = 8000;
    int obs_count = 16;
    double obs_radius_factor = 2.0;
    bool record_timings = false;
};

void validate(const ExperimentSettings& s);

// Ring (n = 2) or Fibonacci sphere (n = 3) of `count` points around `centre`.
std::vector<Point> observation_points(int dimension, const Point& centre, double radius, int count);

inline constexpr double kNotAvailable = std::numeric_limits<double>::quiet_NaN();

struct LevelResult {
    int level = 0;
    double feature_size = 0.0;
    double h = 0.0;
    std::size_t panels = 0;
    std::size_t dofs = 0;
    std::string mesh_hash;
    std::vector<Complex> values;  // u^s at the observation points
    double max_abs = 0.0;
    double difference = kNotAvailable;  // max |u^s_j - u^s_{j-1}|
    double ratio = kNotAvailable;       // difference_j / difference_{j-1}
    double residual = 0.0;
    double seconds = 0.0;
};

struct ConvergenceReport {
    std::string experiment;
    std::string family;
    ExperimentSettings settings;
    std::vector<Point> observation_points;
    std::vector<LevelResult> levels;
    std::string asymptotic_claim;
    std::string measured_trend;
    bool differences_decreasing = false;
    bool max_abs_decreasing = false;
    double final_ratio = kNotAvailable;  // max_abs(last) / max_abs(first)
};

ConvergenceReport converge_prefractal(const PrefractalFamily& family, int first_level, int last_level,
                                      const ExperimentSettings& settings);

// converge_prefractal plus decay of max |u^s_j| towards zero.
ConvergenceReport null_test(const PrefractalFamily& family, int first_level, int last_level,
                            const ExperimentSettings& settings);

// Solid screen Gamma_0 with a hole removed: Gamma_0 \ E_j for a Cantor set
// or dust, or Gamma_0 minus the first j Swiss-cheese balls.
struct HoleSpec {
    enum class Kind { Cantor, SwissCheese } kind = Kind::Cantor;
    int dimension = 2;
    double lambda = 1.0 / 3.0;
    SwissCheeseParams cheese;
};

// Level 0 is the unpunctured screen Gamma_0.
ScreenRegion punctured_screen(const HoleSpec& hole, int level);

struct HoleRow {
    int level = 0;
    std::size_t panels = 0;
    std::size_t dofs = 0;
    std::string mesh_hash;
    double delta = 0.0;  // max over observation points of |u^s(punctured) - u^s(Gamma_0)|
    double max_abs = 0.0;
    double residual = 0.0;
    double seconds = 0.0;
};

struct HoleReport {
    HoleSpec hole;
    ExperimentSettings settings;
    double h = 0.0;
    std::size_t reference_panels = 0;
    std::string reference_hash;
    std::vector<Point> observation_points;
    std::vector<HoleRow> rows;
    std::string asymptotic_claim;
    std::string measured_trend;
};

// One common mesh size for all levels, fixed by the smallest cell at last_level.
HoleReport hole_effect(const HoleSpec& hole, int first_level, int last_level, const ExperimentSettings& settings);

struct GapRow {
    double angle = 0.0;
    Point direction;
    double gap = 0.0;  // max over observation points
    bool near_zero = false;
};

struct GapReport {
    HoleSpec hole;
    int level = 0;
    ExperimentSettings settings;
    double h = 0.0;
    std::vector<Point> observation_points;
    std::vector<GapRow> rows;
    std::string asymptotic_claim;
    std::string measured_trend;
};

// Punctured versus unpunctured discretization for a sweep of plane-wave
// directions in the (x_1, x_n) plane, angles 2 pi i / count.
GapReport formulation_gap(const HoleSpec& hole, int level, int direction_count, const ExperimentSettings& settings,
                          double near_zero_tolerance = 1e-3);

void write_report_csv(std::ostream& os, const ConvergenceReport& r);
void write_report_csv(std::ostream& os, const HoleReport& r);
void write_report_csv(std::ostream& os, const GapReport& r);

// JSON envelopes; `config` is echoed verbatim (pass "null" when absent).
void write_report_json(std::ostream& os, const ConvergenceReport& r, const std::string& config_json);
void write_report_json(std::ostream& os, const HoleReport& r, const std::string& config_json);
void write_report_json(std::ostream& os, const GapReport& r, const std::string& config_json);

}  // namespace screenbem
