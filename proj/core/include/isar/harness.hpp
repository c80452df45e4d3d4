#pragma once

#include <optional>
#include <string>

#include "isar/dip.hpp"
#include "isar/io.hpp"
#include "isar/lowrank.hpp"
#include "isar/metrics.hpp"

namespace isar {

enum class Method { zero_fill, nnm, ialm, dip };

const char* method_name(Method m);
Method method_from_name(const std::string& s);

struct ExperimentConfig {
    std::string input_path;   // CISR file; mutually exclusive with scene_path
    std::string scene_path;   // scene text file
    std::vector<Method> methods;
    std::vector<MaskKind> scenarios;
    std::vector<double> ratios;
    std::vector<std::uint64_t> seeds;
    std::vector<double> noise_snr_db;  // empty = noise-free
    std::string output_dir = "out";
    double top_db = 20.0;
    bool write_artifacts = true;
    // bit-exact reruns: serialize cells and blank the wallclock column,
    // the one field that can never reproduce byte-for-byte
    bool deterministic = false;
    SolverConfig solver;
    DipConfig dip;

    void validate() const;
};

/// Plain-text config: [experiment] / [solver] / [dip] sections of
/// key=value lines. Unknown keys are errors.
ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path);

struct CellResult {
    MetricsReport report;
    ComplexMatrix completed;
};

/// One grid cell: mask, complete, image, score against rd_image(m_full).
/// NNM runs on real/imag parts with the pre-transformation wrapped around
/// column and compressed masks; IALM always runs directly on the complex
/// data; zero-fill is imaging the masked matrix as-is.
CellResult run_cell(const ComplexMatrix& m_full, Method method, MaskKind scenario, double ratio,
                    std::uint64_t seed, const ExperimentConfig& cfg,
                    std::optional<double> noise_snr = std::nullopt);

/// Full method x scenario x ratio x seed (x noise) grid. Writes
/// results.csv, summary.csv and per-cell artifacts under output_dir.
std::vector<MetricsReport> run_grid(const ExperimentConfig& cfg);

std::string summarize_grid(const std::vector<MetricsReport>& rows);

}  // namespace isar
