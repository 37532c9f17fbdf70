#pragma once

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "macrodim/estimator.hpp"

// Experiment runner: binds the simulators, the estimator and the theory
// oracles into seeded, reproducible campaigns with an append-only result
// store.
namespace macrodim {

enum class ExperimentKind {
    boolean_dim,
    stable_range_dim,
    graph_dim,
    zero_set_dim,
    peaks_dim,
    oracle_only,
    lemma_ft_check,
};

std::string to_string(ExperimentKind k);
ExperimentKind experiment_kind_from_string(const std::string& s);

struct ExperimentSpec {
    std::string id;
    ExperimentKind kind = ExperimentKind::boolean_dim;
    nlohmann::json params;  // kind-specific, validated in run()
    int n_max = 10;
    int replicas = 1;
    std::uint64_t base_seed = 0;
    std::optional<FitWindow> fit_window;  // default: top half of shells
    double tolerance = 0.1;
    // empty = kind default (slope for boolean kinds, max otherwise)
    std::string aggregation;

    nlohmann::json to_json() const;
    static ExperimentSpec from_json(const nlohmann::json& j);
    void validate() const;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<DimEstimate> estimates;  // one per replica
    double median = 0;
    double spread = 0;  // max - min across replicas
    std::optional<double> theory;          // absent: no-theory regime
    std::optional<bool> pass;              // absent iff theory is
    // median across replicas of Log_+ count / n, for every shell 1..n_max
    std::vector<double> shell_exponents;
    double wall_time = 0;  // seconds; not persisted (records must be stable)

    // The persisted JSON-lines record: spec echo + outcomes, no timings.
    nlohmann::json record() const;
};

// Executes the replicas (in parallel, up to the MACRODIM_THREADS override or
// the hardware concurrency), aggregates, and queries the matching oracle.
// Lower-module errors are rethrown with the spec id attached.
ExperimentResult run(const ExperimentSpec& spec);

// One sampled pixel set for the given kind/params (the per-replica step of
// run, also the CLI `simulate` backend). Scalar kinds are rejected.
PixelSet sample_pixels(ExperimentKind kind, const nlohmann::json& params, int n_max,
                       std::uint64_t seed);

// Appends one record per line; never rewrites past lines.
void append_record(const std::string& store_path, const nlohmann::json& record);

struct ReportFilter {
    std::string kind;  // empty = all
    std::string id;    // empty = all
};

// Reads a JSON-lines store and emits `id,kind,params,empirical,theory,diff,
// pass` rows. Empty selection still emits the header.
void write_report_csv(std::istream& store, std::ostream& csv, const ReportFilter& filter);

// Per-shell exponent series of one record, `shell,exponent` (plot data).
void write_shell_series_csv(const nlohmann::json& record, std::ostream& os);

// Runs a whole campaign (array of specs), appending records to store_path.
// Returns the results in campaign order.
std::vector<ExperimentResult> run_campaign(const std::vector<ExperimentSpec>& specs,
                                           const std::string& store_path);

int parallelism_degree();

}  // namespace macrodim
