#include "fluidruin/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace fluidruin {

namespace {

using json = nlohmann::json;

constexpr std::array<const char*, 8> kCoordKeys = {
    "pre_states",   "post_states",  "pre_generator", "post_generator",
    "pre_rewards",  "post_rewards", "switch_matrix", "initial_state",
};

[[noreturn]] void schema_error(const std::string& msg) {
    throw ParseError(ParseError::Kind::schema, "schema error: " + msg);
}

[[noreturn]] void dimension_error(const std::string& msg) {
    throw ParseError(ParseError::Kind::dimension, "dimension mismatch: " + msg);
}

std::vector<std::string> read_labels(const json& j, const std::string& path) {
    if (!j.is_array()) schema_error(path + " must be an array of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& item : j) {
        if (!item.is_string()) schema_error(path + " must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

double read_number(const json& j, const std::string& path) {
    if (!j.is_number()) schema_error(path + " must be numeric");
    return j.get<double>();
}

Vector read_vector(const json& j, const std::string& path, std::size_t expected) {
    if (!j.is_array()) schema_error(path + " must be an array of numbers");
    if (j.size() != expected) {
        dimension_error(path + " has " + std::to_string(j.size()) + " entries, expected " +
                        std::to_string(expected));
    }
    Vector v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        v(static_cast<Eigen::Index>(i)) = read_number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

Matrix read_matrix(const json& j, const std::string& path, std::size_t rows, std::size_t cols) {
    if (!j.is_array()) schema_error(path + " must be an array of arrays");
    if (j.size() != rows) {
        dimension_error(path + " has " + std::to_string(j.size()) + " rows, expected " +
                        std::to_string(rows));
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::string row_path = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array()) schema_error(row_path + " must be an array of numbers");
        if (j[r].size() != cols) {
            dimension_error(row_path + " has " + std::to_string(j[r].size()) +
                            " entries, expected " + std::to_string(cols));
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                read_number(j[r][c], row_path + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

CoordinateModel read_coordinate(const json& j, const std::string& name) {
    if (!j.is_object()) schema_error(name + " must be an object");
    for (const char* key : kCoordKeys) {
        if (!j.contains(key)) schema_error("missing field \"" + name + "." + key + "\"");
    }
    for (const auto& item : j.items()) {
        const bool known = std::any_of(kCoordKeys.begin(), kCoordKeys.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) schema_error("unexpected field \"" + name + "." + item.key() + "\"");
    }

    CoordinateModel c;
    c.pre_states = read_labels(j["pre_states"], name + ".pre_states");
    c.post_states = read_labels(j["post_states"], name + ".post_states");
    const std::size_t ne = c.pre_states.size();
    const std::size_t ns = c.post_states.size();
    c.pre_generator = read_matrix(j["pre_generator"], name + ".pre_generator", ne, ne);
    c.post_generator = read_matrix(j["post_generator"], name + ".post_generator", ns, ns);
    c.pre_rewards = read_vector(j["pre_rewards"], name + ".pre_rewards", ne);
    c.post_rewards = read_vector(j["post_rewards"], name + ".post_rewards", ns);
    c.switch_matrix = read_matrix(j["switch_matrix"], name + ".switch_matrix", ne, ns);
    if (!j["initial_state"].is_string()) schema_error(name + ".initial_state must be a string");
    c.initial_state = j["initial_state"].get<std::string>();
    return c;
}

json matrix_to_json(const Matrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(std::move(row));
    }
    return out;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

void check_generator(const Matrix& a, const std::string& field, std::vector<Issue>& issues) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
        const double sum = a.row(r).sum();
        if (!std::isfinite(sum)) {
            issues.push_back({Severity::error, field, "row " + std::to_string(r) + " is not finite"});
            continue;
        }
        if (std::abs(sum) > kRowSumTolerance) {
            issues.push_back({Severity::error, field,
                              "row " + std::to_string(r) + " sums to " + fmt(sum)});
        }
        for (Eigen::Index c = 0; c < a.cols(); ++c) {
            if (r == c && a(r, c) > 0.0) {
                issues.push_back({Severity::error, field,
                                  "diagonal entry " + std::to_string(r) + " is positive"});
            } else if (r != c && a(r, c) < 0.0) {
                issues.push_back({Severity::error, field,
                                  "off-diagonal entry (" + std::to_string(r) + "," +
                                      std::to_string(c) + ") is negative"});
            }
        }
    }
}

void check_rewards(const Vector& v, const std::string& field, std::vector<Issue>& issues) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i))) {
            issues.push_back({Severity::error, field, "entry " + std::to_string(i) + " is not finite"});
        } else if (v(i) == 0.0) {
            issues.push_back({Severity::error, field, "zero reward at entry " + std::to_string(i)});
        }
    }
}

}  // namespace

std::size_t CoordinateModel::initial_index() const {
    const auto it = std::find(pre_states.begin(), pre_states.end(), initial_state);
    if (it == pre_states.end()) {
        throw DomainError("initial state \"" + initial_state + "\" is not a pre-ruin state");
    }
    return static_cast<std::size_t>(it - pre_states.begin());
}

bool ValidationReport::ok() const {
    return std::none_of(issues.begin(), issues.end(),
                        [](const Issue& i) { return i.severity == Severity::error; });
}

std::string ValidationReport::to_string() const {
    std::string out;
    for (const auto& issue : issues) {
        out += issue.severity == Severity::error ? "error " : "warning ";
        out += issue.field + ": " + issue.message + "\n";
    }
    return out;
}

ModelSpec parse_model(std::string_view document) {
    json j;
    try {
        j = json::parse(document.begin(), document.end());
    } catch (const json::parse_error& e) {
        throw ParseError(ParseError::Kind::syntax,
                         "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    if (!j.is_object()) schema_error("top level must be an object");
    for (const char* key : {"coord1", "coord2"}) {
        if (!j.contains(key)) schema_error(std::string("missing field \"") + key + "\"");
    }
    for (const auto& item : j.items()) {
        if (item.key() != "coord1" && item.key() != "coord2") {
            schema_error("unexpected field \"" + item.key() + "\"");
        }
    }
    ModelSpec spec;
    spec.coord[0] = read_coordinate(j["coord1"], "coord1");
    spec.coord[1] = read_coordinate(j["coord2"], "coord2");
    return spec;
}

std::string serialize_model(const ModelSpec& spec) {
    json doc = json::object();
    for (std::size_t k = 0; k < 2; ++k) {
        const auto& c = spec.coord[k];
        json cj = json::object();
        cj["pre_states"] = c.pre_states;
        cj["post_states"] = c.post_states;
        cj["pre_generator"] = matrix_to_json(c.pre_generator);
        cj["post_generator"] = matrix_to_json(c.post_generator);
        cj["pre_rewards"] = vector_to_json(c.pre_rewards);
        cj["post_rewards"] = vector_to_json(c.post_rewards);
        cj["switch_matrix"] = matrix_to_json(c.switch_matrix);
        cj["initial_state"] = c.initial_state;
        doc[k == 0 ? "coord1" : "coord2"] = std::move(cj);
    }
    return doc.dump(2) + "\n";
}

ModelSpec load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open model file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("error reading model file " + path.string());
    return parse_model(buf.str());
}

ValidationReport validate(const CoordinateModel& c, const std::string& prefix) {
    ValidationReport report;
    auto& issues = report.issues;
    const auto ne = static_cast<Eigen::Index>(c.pre_states.size());
    const auto ns = static_cast<Eigen::Index>(c.post_states.size());
    const auto field = [&](const char* name) { return prefix + "." + name; };

    if (ne == 0) issues.push_back({Severity::error, field("pre_states"), "no pre-ruin states"});
    if (ns == 0) issues.push_back({Severity::error, field("post_states"), "no post-ruin states"});

    // Shapes can only be wrong for programmatically built specs.
    const bool shapes_ok = c.pre_generator.rows() == ne && c.pre_generator.cols() == ne &&
                           c.post_generator.rows() == ns && c.post_generator.cols() == ns &&
                           c.pre_rewards.size() == ne && c.post_rewards.size() == ns &&
                           c.switch_matrix.rows() == ne && c.switch_matrix.cols() == ns;
    if (!shapes_ok) {
        issues.push_back({Severity::error, prefix, "matrix or vector dimensions do not match the state lists"});
        return report;
    }

    check_generator(c.pre_generator, field("pre_generator"), issues);
    check_generator(c.post_generator, field("post_generator"), issues);
    check_rewards(c.pre_rewards, field("pre_rewards"), issues);
    check_rewards(c.post_rewards, field("post_rewards"), issues);

    for (Eigen::Index r = 0; r < ne; ++r) {
        const double sum = c.switch_matrix.row(r).sum();
        if (!std::isfinite(sum) || std::abs(sum - 1.0) > kRowSumTolerance) {
            issues.push_back({Severity::error, field("switch_matrix"),
                              "row " + std::to_string(r) + " sums to " + fmt(sum)});
        }
        for (Eigen::Index s = 0; s < ns; ++s) {
            const double p = c.switch_matrix(r, s);
            if (!(p >= 0.0 && p <= 1.0)) {
                issues.push_back({Severity::error, field("switch_matrix"),
                                  "entry (" + std::to_string(r) + "," + std::to_string(s) +
                                      ") is outside [0,1]"});
            }
        }
    }

    const auto it = std::find(c.pre_states.begin(), c.pre_states.end(), c.initial_state);
    if (it == c.pre_states.end()) {
        issues.push_back({Severity::error, field("initial_state"),
                          "\"" + c.initial_state + "\" is not a pre-ruin state"});
    } else {
        const double r0 = c.pre_rewards(it - c.pre_states.begin());
        if (!(r0 > 0.0)) {
            issues.push_back({Severity::error, field("initial_state"), "initial reward must be positive"});
        }
    }
    return report;
}

ValidationReport validate(const ModelSpec& spec) {
    ValidationReport report;
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string prefix = k == 0 ? "coord1" : "coord2";
        auto sub = validate(spec.coord[k], prefix);
        report.issues.insert(report.issues.end(), sub.issues.begin(), sub.issues.end());
        // Labels are qualified by coordinate in every report, so uniqueness is
        // only required within one coordinate (E and S disjoint).
        std::set<std::string> seen;
        for (const auto* list : {&spec.coord[k].pre_states, &spec.coord[k].post_states}) {
            const char* name = list == &spec.coord[k].pre_states ? ".pre_states" : ".post_states";
            for (const auto& label : *list) {
                if (!seen.insert(label).second) {
                    report.issues.push_back({Severity::error, prefix + name,
                                             "state label \"" + label + "\" is not unique"});
                }
            }
        }
    }
    return report;
}

SignPartition partition_signs(const CoordinateModel& coord) {
    SignPartition p;
    for (Eigen::Index i = 0; i < coord.pre_rewards.size(); ++i) {
        (coord.pre_rewards(i) > 0.0 ? p.plus_pre : p.minus_pre).push_back(static_cast<std::size_t>(i));
    }
    for (Eigen::Index i = 0; i < coord.post_rewards.size(); ++i) {
        (coord.post_rewards(i) > 0.0 ? p.plus_post : p.minus_post).push_back(static_cast<std::size_t>(i));
    }
    return p;
}

double gamma_zero(const CoordinateModel& coord) {
    double g = 0.0;
    for (const Matrix* a : {&coord.pre_generator, &coord.post_generator}) {
        if (a->size() > 0) g = std::max(g, a->diagonal().cwiseAbs().maxCoeff());
    }
    return g;
}

double gamma_zero(const ModelSpec& spec) {
    return std::max(gamma_zero(spec.coord[0]), gamma_zero(spec.coord[1]));
}

void renormalize(ModelSpec& spec) {
    for (auto& c : spec.coord) {
        for (Matrix* a : {&c.pre_generator, &c.post_generator}) {
            for (Eigen::Index r = 0; r < a->rows(); ++r) {
                double off = 0.0;
                for (Eigen::Index s = 0; s < a->cols(); ++s) {
                    if (s != r) off += (*a)(r, s);
                }
                (*a)(r, r) = -off;
            }
        }
        for (Eigen::Index r = 0; r < c.switch_matrix.rows(); ++r) {
            const double sum = c.switch_matrix.row(r).sum();
            if (sum > 0.0) c.switch_matrix.row(r) /= sum;
        }
    }
}

double pre_regime_drift(const CoordinateModel& coord) {
    const Eigen::Index n = coord.pre_generator.rows();
    if (n == 0) return 0.0;
    // Solve pi A = 0 with sum(pi) = 1 in the least-squares sense.
    Matrix lhs(n + 1, n);
    lhs.topRows(n) = coord.pre_generator.transpose();
    lhs.row(n).setOnes();
    Vector rhs = Vector::Zero(n + 1);
    rhs(n) = 1.0;
    const Vector pi = lhs.colPivHouseholderQr().solve(rhs);
    return pi.dot(coord.pre_rewards);
}

ModelSpec toy_model() {
    CoordinateModel c;
    c.pre_states = {"e+", "e-"};
    c.post_states = {"s+", "s-"};
    c.pre_generator.resize(2, 2);
    c.pre_generator << -1, 1, 1, -1;
    c.post_generator.resize(2, 2);
    c.post_generator << -2, 2, 2, -2;
    c.pre_rewards.resize(2);
    c.pre_rewards << 1, -1;
    c.post_rewards.resize(2);
    c.post_rewards << 1, -2;
    c.switch_matrix.resize(2, 2);
    c.switch_matrix << 0.5, 0.5, 0.5, 0.5;
    c.initial_state = "e+";

    ModelSpec spec;
    spec.coord[0] = c;
    spec.coord[1] = c;
    return spec;
}

}  // namespace fluidruin
