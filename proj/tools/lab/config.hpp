#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "multavg/forms.hpp"
#include "multavg/numeric.hpp"

namespace multavg::lab {

inline constexpr std::string_view kKinds[] = {"mean",   "halasz-fit", "multiavg",     "gowers",      "decompose",
                                              "probe",  "verify-lemma", "ergodic", "counterexample"};

enum class ParamsMode { trivial, fit, manual };
enum class GowersMethod { fast, recursive, compare };
enum class Lemma { partial, major_arc, structured };

struct ExperimentConfig {
    std::string kind = "mean";
    std::string output;     // empty: standard output
    std::uint64_t seed = 1; // substituted into random_pm1 without an argument
    unsigned threads = 0;   // 0: MULTAVG_THREADS or hardware concurrency
    std::int64_t block_rows = 64;

    std::vector<std::string> functions;
    std::vector<LinearForm> forms;
    std::vector<LinearForm> conj_forms;
    std::vector<std::int64_t> checkpoints;

    std::int64_t mean_a = 1;
    std::int64_t mean_b = 0;

    ParamsMode params = ParamsMode::trivial;
    double manual_t = 0.0;

    double fit_t_min = -4.0;
    double fit_t_max = 4.0;
    double fit_t_step = 1e-2;
    std::uint64_t fit_q_max = 12;
    std::int64_t fit_prime_cutoff = 0;

    unsigned gowers_s = 2;
    GowersMethod gowers_method = GowersMethod::fast;
    double gowers_cost_limit = 1e9;

    std::int64_t kernel_Q = 1;
    std::int64_t kernel_V = 1;

    Lemma lemma = Lemma::partial;
    std::vector<double> lemma_alpha{0.0};
    Complex lemma_c{1.0, 0.0};
    double lemma_t = 0.0;
    std::int64_t lemma_p = 0;
    std::int64_t lemma_xi = 0;

    double ergodic_c = 1.0;
    std::vector<std::pair<std::int64_t, Complex>> ergodic_F;
    std::vector<std::pair<std::int64_t, Complex>> ergodic_G;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses the sectioned key = value format. Errors are InvalidArgument
/// with the line number and the offending field.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

std::string_view to_string(ParamsMode mode);
std::string_view to_string(GowersMethod method);
std::string_view to_string(Lemma lemma);

} // namespace multavg::lab
