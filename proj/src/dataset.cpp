#include "svmma/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "svmma/rng.hpp"

namespace svmma {

void Dataset::validate() const {
    if (n() < 1 || p() < 1) throw std::invalid_argument("dataset must have n >= 1 and p >= 1");
    if (labels.size() != n()) throw std::invalid_argument("labels length does not match row count");
    for (double y : labels) {
        if (y != 1.0 && y != -1.0) throw std::invalid_argument("labels must be -1 or +1");
    }
    for (double v : features.data()) {
        if (!std::isfinite(v)) throw std::invalid_argument("feature entries must be finite");
    }
    if (!feature_names.empty() && feature_names.size() != p()) {
        throw std::invalid_argument("feature_names length does not match column count");
    }
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size() && std::isfinite(out);
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace

Dataset load_csv(const std::string& path, const LabelColumn& label) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_line(line));
    }
    if (rows.empty()) throw std::runtime_error("empty file: " + path);

    const std::size_t ncols = rows[0].size();
    if (ncols < 2) throw std::runtime_error("need at least one feature column and a label column");
    for (const auto& r : rows) {
        if (r.size() != ncols) throw std::runtime_error("ragged row in " + path);
    }

    // Resolve the label column and decide whether row 0 is a header. A
    // name selector requires a header; with an index selector row 0 is a
    // header iff some feature cell in it is non-numeric.
    std::size_t label_col = 0;
    std::size_t first_data_row = 0;
    std::vector<std::string> header;
    if (label.is_name()) {
        header = rows[0];
        auto it = std::find(header.begin(), header.end(), label.name);
        if (it == header.end()) throw std::runtime_error("label column not found: " + label.name);
        label_col = static_cast<std::size_t>(it - header.begin());
        first_data_row = 1;
    } else {
        if (label.index < 0 || static_cast<std::size_t>(label.index) >= ncols) {
            throw std::runtime_error("label column index out of range");
        }
        label_col = static_cast<std::size_t>(label.index);
        double tmp;
        bool numeric_row0 = true;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (j == label_col) continue;
            if (!parse_double(rows[0][j], tmp)) {
                numeric_row0 = false;
                break;
            }
        }
        if (!numeric_row0) {
            header = rows[0];
            first_data_row = 1;
        }
    }
    if (first_data_row >= rows.size()) throw std::runtime_error("no data rows in " + path);

    const std::size_t n = rows.size() - first_data_row;
    const std::size_t p = ncols - 1;

    std::set<std::string> label_values;
    for (std::size_t i = first_data_row; i < rows.size(); ++i) {
        label_values.insert(rows[i][label_col]);
    }
    if (label_values.size() != 2) throw std::runtime_error("labels not binary");
    const std::string positive = *label_values.rbegin();  // lexicographically larger -> +1

    Dataset ds;
    ds.features = Matrix(n, p);
    ds.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = rows[first_data_row + i];
        ds.labels[i] = (r[label_col] == positive) ? 1.0 : -1.0;
        std::size_t jj = 0;
        for (std::size_t j = 0; j < ncols; ++j) {
            if (j == label_col) continue;
            double v;
            if (!parse_double(r[j], v)) {
                throw std::runtime_error("non-numeric feature cell in row " +
                                         std::to_string(first_data_row + i + 1));
            }
            ds.features(i, jj++) = v;
        }
    }
    if (!header.empty()) {
        for (std::size_t j = 0; j < ncols; ++j) {
            if (j != label_col) ds.feature_names.push_back(header[j]);
        }
    }
    ds.validate();
    return ds;
}

std::pair<Dataset, StandardizationParams> standardize(const Dataset& train) {
    const std::size_t n = train.n(), p = train.p();
    StandardizationParams params;
    params.means.resize(p);
    params.scales.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += train.features(i, j);
        m /= static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = train.features(i, j) - m;
            v += d * d;
        }
        const double sd = std::sqrt(v / static_cast<double>(n));
        params.means[j] = m;
        params.scales[j] = sd;
    }
    return {apply_standardization(train, params), params};
}

Dataset apply_standardization(const Dataset& data, const StandardizationParams& params) {
    if (params.means.size() != data.p() || params.scales.size() != data.p()) {
        throw std::invalid_argument("standardization params do not match column count");
    }
    Dataset out = data;
    for (std::size_t j = 0; j < data.p(); ++j) {
        const double m = params.means[j];
        const double s = params.scales[j];
        for (std::size_t i = 0; i < data.n(); ++i) {
            const double c = data.features(i, j) - m;
            out.features(i, j) = (s > 0.0) ? c / s : c;
        }
    }
    return out;
}

namespace {

Dataset take_rows(const Dataset& data, const std::vector<std::size_t>& idx) {
    Dataset out;
    out.features = Matrix(idx.size(), data.p());
    out.labels.resize(idx.size());
    out.feature_names = data.feature_names;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        auto src = data.features.row(idx[i]);
        auto dst = out.features.row(i);
        std::copy(src.begin(), src.end(), dst.begin());
        out.labels[i] = data.labels[idx[i]];
    }
    return out;
}

}  // namespace

std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must be in (0,1)");
    }
    const std::size_t total = data.n();
    const std::size_t n_train =
        static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(total)));
    if (n_train < 1 || total - n_train < 1) {
        throw std::invalid_argument("split leaves an empty subset");
    }
    std::vector<std::size_t> perm(total);
    std::iota(perm.begin(), perm.end(), 0);
    RngStream rng(spec.seed);
    rng.shuffle(perm);
    std::vector<std::size_t> train_idx(perm.begin(), perm.begin() + static_cast<long>(n_train));
    std::vector<std::size_t> test_idx(perm.begin() + static_cast<long>(n_train), perm.end());
    return {take_rows(data, train_idx), take_rows(data, test_idx)};
}

}  // namespace svmma
