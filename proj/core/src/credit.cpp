#include "aos/credit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "aos/error.hpp"

namespace aos {

RewardVector compute_reward(const Evaluation& prev, const Evaluation& next) {
    if (prev.objectives.size() != next.objectives.size()) {
        throw DimensionError("compute_reward: objective counts differ");
    }
    RewardVector r(prev.objectives.size(), 0.0);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double before = prev.objectives[j];
        r[j] = std::max(0.0, (next.objectives[j] - before) / (std::abs(before) + 1.0));
    }
    return r;
}

namespace {

void check_params(const CreditParams& params) {
    if (!(params.beta >= 0.0 && params.beta <= 1.0)) {
        throw ConfigError("beta must lie in [0, 1]");
    }
    if (!(params.gamma >= 0.0 && params.gamma <= 1.0)) {
        throw ConfigError("gamma must lie in [0, 1]");
    }
}

}  // namespace

CreditModel::CreditModel(std::size_t operators, std::size_t objectives, std::size_t solution_length,
                         CreditParams params)
    : operators_(operators),
      objectives_(objectives),
      length_(solution_length),
      params_(params),
      centers_(operators * objectives * solution_length, 0.5),
      counters_(operators * objectives, 0),
      q_(operators * objectives, 0.0) {
    if (operators == 0 || objectives == 0 || solution_length == 0) {
        throw ConfigError("credit model dimensions must be positive");
    }
    check_params(params_);
}

CreditModel CreditModel::from_state(std::size_t operators, std::size_t objectives, std::size_t solution_length,
                                    CreditParams params, std::vector<double> centers,
                                    std::vector<std::uint64_t> counters, std::vector<double> q_table) {
    CreditModel model(operators, objectives, solution_length, params);
    if (centers.size() != model.centers_.size() || counters.size() != model.counters_.size() ||
        q_table.size() != model.q_.size()) {
        throw std::invalid_argument("credit state arrays do not match the model dimensions");
    }
    for (double c : centers) {
        if (!(c >= 0.0 && c <= 1.0)) {
            throw std::invalid_argument("cluster centre component outside [0, 1]");
        }
    }
    for (double q : q_table) {
        if (!std::isfinite(q)) {
            throw std::invalid_argument("q value is not finite");
        }
    }
    model.centers_ = std::move(centers);
    model.counters_ = std::move(counters);
    model.q_ = std::move(q_table);
    return model;
}

std::size_t CreditModel::cell(OperatorId op, std::size_t objective) const {
    if (op.value >= operators_ || objective >= objectives_) {
        throw std::out_of_range("credit cell (" + std::to_string(op.value) + ", " + std::to_string(objective) +
                                ") outside the model");
    }
    return op.value * objectives_ + objective;
}

void CreditModel::check_state(const BitSolution& x) const {
    if (x.size() != length_) {
        throw DimensionError("credit model expects states of length " + std::to_string(length_) + ", got " +
                             std::to_string(x.size()));
    }
}

std::span<const double> CreditModel::center(OperatorId op, std::size_t objective) const {
    return std::span<const double>(centers_).subspan(cell(op, objective) * length_, length_);
}

double CreditModel::cluster_credit(const BitSolution& x, OperatorId op, std::size_t objective) const {
    check_state(x);
    const auto c = center(op, objective);
    const auto bits = x.bits();
    double sq = 0.0;
    for (std::size_t e = 0; e < length_; ++e) {
        const double d = static_cast<double>(bits[e]) - c[e];
        sq += d * d;
    }
    const double distance = std::sqrt(sq);
    return params_.mode == CreditMode::literal ? distance : 1.0 / (1.0 + distance);
}

double CreditModel::effective_credit(const BitSolution& x, OperatorId op, std::size_t objective) const {
    const double cluster = params_.use_cluster ? cluster_credit(x, op, objective) : 1.0;
    const double value = params_.use_q ? 1.0 + q(op, objective) : 1.0;
    return cluster * value;
}

double CreditModel::best_effective_credit(const BitSolution& x, std::size_t objective) const {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < operators_; ++i) {
        best = std::max(best, effective_credit(x, OperatorId{i}, objective));
    }
    return best;
}

UpdateOutcome CreditModel::bellman_update(OperatorId op, std::size_t objective, double reward, double next_best_q) {
    const std::size_t k = cell(op, objective);
    if (frozen_) {
        return UpdateOutcome::skipped;
    }
    q_[k] += params_.beta * (reward + params_.gamma * next_best_q - q_[k]);
    return UpdateOutcome::applied;
}

UpdateOutcome CreditModel::update_on_success(const BitSolution& x_prime, OperatorId op,
                                             std::span<const double> reward) {
    check_state(x_prime);
    if (reward.size() != objectives_) {
        throw DimensionError("update_on_success: reward vector has " + std::to_string(reward.size()) +
                             " entries, model has " + std::to_string(objectives_) + " objectives");
    }
    cell(op, 0);
    if (frozen_) {
        return UpdateOutcome::skipped;
    }
    const auto bits = x_prime.bits();
    for (std::size_t j = 0; j < objectives_; ++j) {
        if (!(reward[j] > 0.0)) {
            continue;
        }
        const std::size_t k = cell(op, j);
        const double n = static_cast<double>(++counters_[k]);
        double* c = centers_.data() + k * length_;
        for (std::size_t e = 0; e < length_; ++e) {
            c[e] += (static_cast<double>(bits[e]) - c[e]) / n;
            // Rounding can push a mean of 0/1 values a hair outside [0, 1].
            c[e] = std::clamp(c[e], 0.0, 1.0);
        }
    }
    for (std::size_t j = 0; j < objectives_; ++j) {
        bellman_update(op, j, reward[j], best_effective_credit(x_prime, j));
    }
    return UpdateOutcome::applied;
}

CreditView credit_of(const CreditModel& model, const BitSolution& x) {
    CreditView view(model.operator_count(), model.objective_count());
    for (std::size_t i = 0; i < model.operator_count(); ++i) {
        for (std::size_t j = 0; j < model.objective_count(); ++j) {
            view(i, j) = model.cluster_credit(x, OperatorId{i}, j);
        }
    }
    return view;
}

CreditView effective_credit_of(const CreditModel& model, const BitSolution& x) {
    CreditView view(model.operator_count(), model.objective_count());
    for (std::size_t i = 0; i < model.operator_count(); ++i) {
        for (std::size_t j = 0; j < model.objective_count(); ++j) {
            view(i, j) = model.effective_credit(x, OperatorId{i}, j);
        }
    }
    return view;
}

// ---------------------------------------------------------------------------
// Persistence

std::string_view to_string(TransferMode mode) {
    switch (mode) {
    case TransferMode::fresh: return "fresh";
    case TransferMode::frozen: return "frozen";
    case TransferMode::continue_learning: return "continue";
    }
    return "fresh";
}

TransferMode parse_transfer_mode(std::string_view text) {
    if (text == "fresh") {
        return TransferMode::fresh;
    }
    if (text == "frozen") {
        return TransferMode::frozen;
    }
    if (text == "continue") {
        return TransferMode::continue_learning;
    }
    throw ConfigError("unknown transfer mode '" + std::string(text) + "' (valid: fresh, frozen, continue)");
}

using nlohmann::json;

std::string format_experience(const CreditModel& model) {
    const std::size_t ops = model.operator_count();
    const std::size_t objs = model.objective_count();
    const std::size_t m = model.solution_length();
    json centers = json::array();
    json counters = json::array();
    json q_table = json::array();
    for (std::size_t i = 0; i < ops; ++i) {
        json c_row = json::array();
        json n_row = json::array();
        json q_row = json::array();
        for (std::size_t j = 0; j < objs; ++j) {
            const auto c = model.center(OperatorId{i}, j);
            c_row.push_back(std::vector<double>(c.begin(), c.end()));
            n_row.push_back(model.counter(OperatorId{i}, j));
            q_row.push_back(model.q(OperatorId{i}, j));
        }
        centers.push_back(std::move(c_row));
        counters.push_back(std::move(n_row));
        q_table.push_back(std::move(q_row));
    }
    json doc = json::object();
    doc["version"] = kExperienceVersion;
    doc["operators"] = ops;
    doc["objectives"] = objs;
    doc["solution_length"] = m;
    doc["centers"] = std::move(centers);
    doc["counters"] = std::move(counters);
    doc["q_table"] = std::move(q_table);
    doc["beta"] = model.beta();
    doc["gamma"] = model.gamma();
    return doc.dump(1) + "\n";
}

void save_experience(const CreditModel& model, const std::filesystem::path& path) {
    const std::string text = format_experience(model);
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError(tmp, "cannot open for writing");
        }
        out << text;
        out.flush();
        if (!out) {
            throw IoError(tmp, "write failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError(path, "cannot replace experience file");
    }
}

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw ExperienceError(ExperienceErrorKind::corrupt, what); }

std::size_t positive_size(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_unsigned() || doc[key].get<std::size_t>() == 0) {
        corrupt(std::string("'") + key + "' must be a positive integer");
    }
    return doc[key].get<std::size_t>();
}

double unit_interval(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) {
        corrupt(std::string("'") + key + "' must be a number");
    }
    const double v = doc[key].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
        corrupt(std::string("'") + key + "' must lie in [0, 1]");
    }
    return v;
}

const json& grid(const json& doc, const char* key, std::size_t rows, std::size_t cols) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].size() != rows) {
        corrupt(std::string("'") + key + "' must have one row per operator");
    }
    for (const auto& row : doc[key]) {
        if (!row.is_array() || row.size() != cols) {
            corrupt(std::string("'") + key + "' rows must have one entry per objective");
        }
    }
    return doc[key];
}

}  // namespace

CreditModel parse_experience(std::string_view json_text, const CreditParams& params) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        corrupt(e.what());
    }
    if (!doc.is_object()) {
        corrupt("top level must be an object");
    }
    if (!doc.contains("version") || !doc["version"].is_number_integer()) {
        corrupt("missing integer 'version'");
    }
    if (doc["version"].get<long long>() != kExperienceVersion) {
        throw ExperienceError(ExperienceErrorKind::version, "file has version " + doc["version"].dump() +
                                                                ", supported version is " +
                                                                std::to_string(kExperienceVersion));
    }
    const std::size_t ops = positive_size(doc, "operators");
    const std::size_t objs = positive_size(doc, "objectives");
    const std::size_t m = positive_size(doc, "solution_length");
    CreditParams merged = params;
    merged.beta = unit_interval(doc, "beta");
    merged.gamma = unit_interval(doc, "gamma");

    std::vector<double> centers;
    std::vector<std::uint64_t> counters;
    std::vector<double> q_table;
    centers.reserve(ops * objs * m);
    const json& c_grid = grid(doc, "centers", ops, objs);
    const json& n_grid = grid(doc, "counters", ops, objs);
    const json& q_grid = grid(doc, "q_table", ops, objs);
    for (std::size_t i = 0; i < ops; ++i) {
        for (std::size_t j = 0; j < objs; ++j) {
            const json& c = c_grid[i][j];
            if (!c.is_array() || c.size() != m) {
                corrupt("every centre must hold solution_length values");
            }
            for (const auto& v : c) {
                if (!v.is_number()) {
                    corrupt("centre components must be numbers");
                }
                centers.push_back(v.get<double>());
            }
            if (!n_grid[i][j].is_number_unsigned()) {
                corrupt("counters must be non-negative integers");
            }
            counters.push_back(n_grid[i][j].get<std::uint64_t>());
            if (!q_grid[i][j].is_number()) {
                corrupt("q_table entries must be numbers");
            }
            q_table.push_back(q_grid[i][j].get<double>());
        }
    }
    try {
        return CreditModel::from_state(ops, objs, m, merged, std::move(centers), std::move(counters),
                                       std::move(q_table));
    } catch (const std::invalid_argument& e) {
        corrupt(e.what());
    }
}

CreditModel load_experience(const std::filesystem::path& path, TransferMode mode, const ModelShape& shape,
                            const CreditParams& params) {
    if (mode == TransferMode::fresh) {
        return CreditModel(shape.operators, shape.objectives, shape.solution_length, params);
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(path, "cannot open experience file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    CreditModel model = parse_experience(buffer.str(), params);
    if (model.operator_count() != shape.operators || model.objective_count() != shape.objectives ||
        model.solution_length() != shape.solution_length) {
        throw ExperienceError(
            ExperienceErrorKind::dimension,
            "file has (operators, objectives, solution_length) = (" + std::to_string(model.operator_count()) + ", " +
                std::to_string(model.objective_count()) + ", " + std::to_string(model.solution_length()) +
                "), run expects (" + std::to_string(shape.operators) + ", " + std::to_string(shape.objectives) +
                ", " + std::to_string(shape.solution_length) + ")");
    }
    model.set_frozen(mode == TransferMode::frozen);
    return model;
}

}  // namespace aos
