#include <grasp/data.hpp>
#include <grasp/csv.hpp>
#include <grasp/error.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace grasp::data {

std::vector<double> Standardization::to_original(std::span<const double> beta_std) const
{
    if (beta_std.size() != x_sd.size()) {
        throw DataError("to_original: coefficient count does not match predictors");
    }
    std::vector<double> out(beta_std.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = beta_std[j] * y_sd / x_sd[j];
    }
    return out;
}

double Standardization::intercept(std::span<const double> beta_orig) const
{
    double c = y_mean;
    for (std::size_t j = 0; j < beta_orig.size(); ++j) {
        c -= beta_orig[j] * x_mean[j];
    }
    return c;
}

std::vector<double> Standardization::predict(const Matrix& x_orig, std::span<const double> beta_orig) const
{
    std::vector<double> fitted = linalg::multiply(x_orig, beta_orig);
    const double c = intercept(beta_orig);
    for (double& v : fitted) {
        v += c;
    }
    return fitted;
}

namespace {

void moments(const std::vector<double>& v, double& mean, double& sd)
{
    const double n = static_cast<double>(v.size());
    mean = 0.0;
    for (double x : v) {
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (double x : v) {
        ss += (x - mean) * (x - mean);
    }
    sd = std::sqrt(ss / (n - 1.0));
}

} // namespace

StandardizedData standardize(const Matrix& x, std::span<const double> y, std::vector<std::string> names,
                             const std::string& response_name)
{
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    if (n < 2) {
        throw DataError("standardize: need at least two rows");
    }
    if (y.size() != n) {
        throw DataError("standardize: response length does not match rows");
    }
    if (names.empty()) {
        for (std::size_t j = 0; j < p; ++j) {
            names.push_back("x" + std::to_string(j + 1));
        }
    }
    if (names.size() != p) {
        throw DataError("standardize: need one name per column");
    }

    StandardizedData out;
    out.record.names = std::move(names);
    out.record.x_mean.resize(p);
    out.record.x_sd.resize(p);
    out.x = Matrix(n, p);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = x(i, j);
        }
        double mean, sd;
        moments(column, mean, sd);
        if (!(sd > 0.0) || sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
            throw DataError("column '" + out.record.names[j] + "' has zero variance");
        }
        out.record.x_mean[j] = mean;
        out.record.x_sd[j] = sd;
        for (std::size_t i = 0; i < n; ++i) {
            out.x(i, j) = (column[i] - mean) / sd;
        }
    }
    std::vector<double> yv(y.begin(), y.end());
    double mean, sd;
    moments(yv, mean, sd);
    if (!(sd > 0.0) || sd <= 1e-12 * std::max(1.0, std::abs(mean))) {
        throw DataError("column '" + response_name + "' has zero variance");
    }
    out.record.y_mean = mean;
    out.record.y_sd = sd;
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.y[i] = (yv[i] - mean) / sd;
    }
    return out;
}

std::vector<std::size_t> read_group_spec(const std::string& path, const std::vector<std::string>& predictors)
{
    const csv::Table t = csv::read_file(path);
    csv::require_header(t, {"column_name", "group_id"}, path);
    std::map<std::string, std::size_t> ids;
    std::set<std::size_t> distinct;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& name = t.rows[r][0];
        const std::size_t id = csv::parse_count(t.rows[r][1], r + 2, 2);
        if (id == 0) {
            throw ParseError(path + ": group ids start at 1 (row " + std::to_string(r + 2) + ")", r + 2, 2);
        }
        if (!ids.emplace(name, id).second) {
            throw DataError(path + ": column '" + name + "' listed twice");
        }
        distinct.insert(id);
    }
    if (distinct.empty() || *distinct.rbegin() != distinct.size()) {
        throw DataError(path + ": group ids must cover 1.." + std::to_string(distinct.size()) + " contiguously");
    }
    std::vector<std::size_t> groups(predictors.size());
    for (std::size_t j = 0; j < predictors.size(); ++j) {
        const auto it = ids.find(predictors[j]);
        if (it == ids.end()) {
            throw DataError("predictor '" + predictors[j] + "' has no group in " + path);
        }
        groups[j] = it->second - 1;
        ids.erase(it);
    }
    if (!ids.empty()) {
        throw DataError(path + ": column '" + ids.begin()->first + "' is not a predictor in the data");
    }
    std::set<std::size_t> used(groups.begin(), groups.end());
    if (used.size() != distinct.size()) {
        throw DataError(path + ": some group ids have no predictors");
    }
    return groups;
}

LoadedDataset load_and_standardize(const DatasetFile& file)
{
    const csv::Table t = csv::read_file(file.path);
    const std::size_t response_col = [&] {
        try {
            return t.column(file.response);
        } catch (const DataError&) {
            throw DataError(file.path + ": response column '" + file.response + "' not found");
        }
    }();
    const std::size_t n = t.rows.size();
    const std::size_t p = t.header.size() - 1;
    if (n < 2) {
        throw DataError(file.path + ": need at least two data rows");
    }
    if (p == 0) {
        throw DataError(file.path + ": no predictor columns");
    }

    LoadedDataset out;
    out.x_original = Matrix(n, p);
    out.y_original.resize(n);
    std::vector<std::string> names;
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (j != response_col) {
            names.push_back(t.header[j]);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t k = 0;
        for (std::size_t j = 0; j < t.header.size(); ++j) {
            const double v = csv::parse_number(t.rows[i][j], i + 2, j + 1);
            if (!std::isfinite(v)) {
                throw ParseError(file.path + ": non-finite value at row " + std::to_string(i + 2) + ", column "
                                     + std::to_string(j + 1),
                                 i + 2, j + 1);
            }
            if (j == response_col) {
                out.y_original[i] = v;
            } else {
                out.x_original(i, k++) = v;
            }
        }
    }

    StandardizedData s = standardize(out.x_original, out.y_original, names, file.response);
    out.record = std::move(s.record);
    out.design.x = std::move(s.x);
    out.design.y = std::move(s.y);
    out.grouped = !file.group_spec.empty() && file.group_spec != "none";
    out.design.groups = out.grouped ? read_group_spec(file.group_spec, out.record.names)
                                    : std::vector<std::size_t>(p, 0);
    out.design.validate();
    return out;
}

} // namespace grasp::data
