#pragma once

// Tabular outputs and their readers. Every writer has a matching reader with
// read(write(x)) == x.

#include <grasp/csv.hpp>
#include <grasp/data.hpp>
#include <grasp/gibbs.hpp>
#include <grasp/prior_analysis.hpp>
#include <grasp/simulation.hpp>

#include <string>
#include <vector>

namespace grasp::report {

struct SummaryRow
{
    std::string coefficient;
    double mean = 0.0;
    double sd = 0.0;
    double q025 = 0.0;
    double q975 = 0.0;

    bool operator==(const SummaryRow&) const = default;
};

/// Original-scale coefficient summaries, one row per predictor.
std::vector<SummaryRow> coefficient_summary(const PosteriorDraws& draws, const data::Standardization& record);
/// Original-scale intercept ȳ − Σ β_j x̄_j summarized over draws.
SummaryRow intercept_summary(const PosteriorDraws& draws, const data::Standardization& record);

csv::Table summary_table(const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary(const csv::Table& table);

struct DiagnosticRow
{
    std::string parameter;
    std::size_t attempts = 0;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
    double acceptance_rate = 0.0;

    bool operator==(const DiagnosticRow&) const = default;
};

/// MH counters per learned shape (summed over chains) plus a
/// "beta_factorization" row whose `skipped` counts failed β updates out of
/// `attempts` sweeps.
std::vector<DiagnosticRow> diagnostics(const PosteriorDraws& draws, const HyperConfig& config);

csv::Table diagnostics_table(const std::vector<DiagnosticRow>& rows);
std::vector<DiagnosticRow> read_diagnostics(const csv::Table& table);

/// chain, draw, one column per coefficient (original scale), sigma2, tau2.
csv::Table chains_table(const PosteriorDraws& draws, const data::Standardization& record);

/// scenario, snr, estimator, replicates, failures, z0, nz0, oa
csv::Table study_table(const std::vector<sim::StudyRow>& rows);
/// scenario, snr, estimator, time_s
csv::Table timing_table(const std::vector<sim::StudyRow>& rows);
/// Reads a study table; time_s is left at zero.
std::vector<sim::StudyRow> read_study(const csv::Table& table);

csv::Table histogram_table(const prior::Histogram& h);
prior::Histogram read_histogram(const csv::Table& table);

struct DensityRow
{
    double x = 0.0;
    double log_density = 0.0;
    double density = 0.0;

    bool operator==(const DensityRow&) const = default;
};

csv::Table density_table(const std::vector<DensityRow>& rows, const std::string& variable);
std::vector<DensityRow> read_density(const csv::Table& table);

} // namespace grasp::report
