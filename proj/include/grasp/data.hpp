#pragma once

#include <grasp/gibbs.hpp>
#include <grasp/linalg.hpp>

#include <span>
#include <string>
#include <vector>

namespace grasp::data {

/// Column means and SDs (n − 1 denominator) used to map between the
/// standardized space the sampler works in and the original data scale.
struct Standardization
{
    std::vector<std::string> names;
    std::vector<double> x_mean;
    std::vector<double> x_sd;
    double y_mean = 0.0;
    double y_sd = 1.0;

    /// β_j,orig = β_j,std · sd_y / sd_xj
    std::vector<double> to_original(std::span<const double> beta_std) const;
    /// ȳ − Σ_j β_j,orig x̄_j
    double intercept(std::span<const double> beta_orig) const;
    /// Fitted values on the original scale.
    std::vector<double> predict(const Matrix& x_orig, std::span<const double> beta_orig) const;
    /// Maps a standardized-space prediction back to the response scale.
    double response_to_original(double y_std) const { return y_mean + y_sd * y_std; }
};

struct StandardizedData
{
    Matrix x;
    std::vector<double> y;
    Standardization record;
};

/// Centers and scales every column of x and y. Throws DataError naming the
/// first zero-variance column. Requires n ≥ 2.
StandardizedData standardize(const Matrix& x, std::span<const double> y, std::vector<std::string> names,
                             const std::string& response_name = "response");

struct DatasetFile
{
    std::string path;
    std::string response;
    /// Two-column CSV (column_name, group_id); empty means ungrouped.
    std::string group_spec;
};

struct LoadedDataset
{
    DesignData design;  // standardized
    Standardization record;
    Matrix x_original;
    std::vector<double> y_original;
    bool grouped = false;
};

/// Maps predictor names to 0-based group indices from a group spec table.
/// Group ids in the file must be integers covering 1..G; every predictor must
/// be listed. Throws DataError otherwise.
std::vector<std::size_t> read_group_spec(const std::string& path, const std::vector<std::string>& predictors);

/// Reads the data CSV, splits off the response column and standardizes.
/// Ungrouped files put every predictor in a single group.
LoadedDataset load_and_standardize(const DatasetFile& file);

} // namespace grasp::data
