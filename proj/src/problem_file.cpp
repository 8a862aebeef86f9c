#include "condexp/problem_file.hpp"

#include "condexp/error.hpp"
#include "json_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace condexp {

namespace detail {

Json problem_to_json(const ProblemFile& problem) {
    Json doc = Json::object();
    if (!problem.outcomes.empty()) doc["outcomes"] = problem.outcomes;
    doc["probabilities"] = problem.probabilities;
    Json vars = Json::object();
    for (const auto& [name, values] : problem.variables) vars[name] = values;
    doc["variables"] = std::move(vars);
    Json sigmas = Json::object();
    for (const auto& [name, spec] : problem.sigma_algebras) {
        Json entry = Json::object();
        entry[spec.kind == SigmaSpec::Kind::Atoms ? "atoms" : "generators"] = spec.sets;
        sigmas[name] = std::move(entry);
    }
    doc["sigma_algebras"] = std::move(sigmas);
    return doc;
}

namespace {

[[noreturn]] void parse_error(const std::string& what) {
    throw Error(ErrorCode::Parse, what);
}

const Json& require_key(const Json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) parse_error(where + ": missing \"" + key + "\"");
    return *it;
}

std::vector<double> number_array(const Json& node, const std::string& where) {
    if (!node.is_array()) parse_error(where + ": expected an array of numbers");
    std::vector<double> out;
    out.reserve(node.size());
    for (const auto& v : node) {
        if (!v.is_number()) parse_error(where + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<std::vector<std::size_t>> index_sets(const Json& node, const std::string& where) {
    if (!node.is_array()) parse_error(where + ": expected an array of index lists");
    std::vector<std::vector<std::size_t>> out;
    for (const auto& set : node) {
        if (!set.is_array()) parse_error(where + ": expected an array of index lists");
        std::vector<std::size_t> members;
        for (const auto& idx : set) {
            if (!idx.is_number_unsigned()) parse_error(where + ": indices must be non-negative integers");
            members.push_back(idx.get<std::size_t>());
        }
        out.push_back(std::move(members));
    }
    return out;
}

}  // namespace

ProblemFile problem_from_json(const Json& root) {
    if (!root.is_object()) parse_error("problem document must be a JSON object");
    const Json& doc = root.contains("problem") ? root["problem"] : root;
    if (!doc.is_object()) parse_error("\"problem\" must be a JSON object");

    ProblemFile problem;
    if (auto it = doc.find("outcomes"); it != doc.end()) {
        if (!it->is_array()) parse_error("outcomes: expected an array of strings");
        for (const auto& label : *it) {
            if (!label.is_string()) parse_error("outcomes: expected an array of strings");
            problem.outcomes.push_back(label.get<std::string>());
        }
    }
    problem.probabilities = number_array(require_key(doc, "probabilities", "problem"),
                                         "probabilities");

    if (auto it = doc.find("variables"); it != doc.end()) {
        if (!it->is_object()) parse_error("variables: expected an object");
        for (const auto& [name, values] : it->items())
            problem.variables.emplace_back(name, number_array(values, "variables." + name));
    }
    if (auto it = doc.find("sigma_algebras"); it != doc.end()) {
        if (!it->is_object()) parse_error("sigma_algebras: expected an object");
        for (const auto& [name, entry] : it->items()) {
            const std::string where = "sigma_algebras." + name;
            if (!entry.is_object()) parse_error(where + ": expected an object");
            const bool has_atoms = entry.contains("atoms");
            const bool has_gens = entry.contains("generators");
            if (has_atoms == has_gens)
                parse_error(where + ": give exactly one of \"atoms\" or \"generators\"");
            SigmaSpec spec;
            spec.kind = has_atoms ? SigmaSpec::Kind::Atoms : SigmaSpec::Kind::Generators;
            spec.sets = index_sets(entry[has_atoms ? "atoms" : "generators"], where);
            problem.sigma_algebras.emplace_back(name, std::move(spec));
        }
    }
    problem.validate();
    return problem;
}

}  // namespace detail

namespace {

// Rejects objects with repeated keys, which the JSON parser would otherwise
// collapse silently.
detail::Json parse_strict(std::string_view text) {
    std::vector<std::set<std::string>> open_objects;
    std::string duplicate;
    auto callback = [&](int, detail::Json::parse_event_t event, detail::Json& parsed) {
        using Event = detail::Json::parse_event_t;
        if (event == Event::object_start) {
            open_objects.emplace_back();
        } else if (event == Event::object_end) {
            if (!open_objects.empty()) open_objects.pop_back();
        } else if (event == Event::key && !open_objects.empty()) {
            const auto key = parsed.get<std::string>();
            if (!open_objects.back().insert(key).second && duplicate.empty()) duplicate = key;
        }
        return true;
    };
    detail::Json doc;
    try {
        doc = detail::Json::parse(text.begin(), text.end(), callback);
    } catch (const detail::Json::parse_error& e) {
        throw Error(ErrorCode::Parse, std::string("malformed JSON: ") + e.what());
    }
    if (!duplicate.empty()) throw Error(ErrorCode::Parse, "duplicate key \"" + duplicate + "\"");
    return doc;
}

}  // namespace

ProblemFile ProblemFile::parse(std::string_view text) {
    return detail::problem_from_json(parse_strict(text));
}

ProblemFile ProblemFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Parse, "cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string ProblemFile::to_json() const {
    return detail::problem_to_json(*this).dump(2) + "\n";
}

void ProblemFile::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    out << to_json();
}

void ProblemFile::validate() const {
    const std::size_t n = probabilities.size();
    // Weight validation lives in ProbabilitySpace::create.
    (void)space();
    if (!outcomes.empty() && outcomes.size() != n)
        throw Error(ErrorCode::SizeMismatch, "outcomes and probabilities differ in length");

    std::set<std::string> names;
    for (const auto& [name, values] : variables) {
        if (!names.insert(name).second)
            throw Error(ErrorCode::InvalidArgument, "duplicate variable name \"" + name + "\"");
        if (values.size() != n) {
            std::ostringstream msg;
            msg << "variable \"" << name << "\" has " << values.size() << " values, expected " << n;
            throw Error(ErrorCode::SizeMismatch, msg.str());
        }
        (void)RandomVariable(values);
    }
    names.clear();
    for (const auto& [name, spec] : sigma_algebras) {
        if (!names.insert(name).second)
            throw Error(ErrorCode::InvalidArgument, "duplicate sigma-algebra name \"" + name + "\"");
        try {
            (void)sigma(name);
        } catch (const Error& e) {
            throw Error(e.code(), "sigma-algebra \"" + name + "\": " + e.what());
        }
    }
}

ProbabilitySpace ProblemFile::space() const {
    return ProbabilitySpace::create(probabilities, outcomes);
}

bool ProblemFile::has_variable(const std::string& name) const {
    return std::any_of(variables.begin(), variables.end(),
                       [&](const auto& v) { return v.first == name; });
}

bool ProblemFile::has_sigma(const std::string& name) const {
    return std::any_of(sigma_algebras.begin(), sigma_algebras.end(),
                       [&](const auto& s) { return s.first == name; });
}

RandomVariable ProblemFile::variable(const std::string& name) const {
    for (const auto& [key, values] : variables)
        if (key == name) return RandomVariable(values);
    throw Error(ErrorCode::UnknownName, "no variable named \"" + name + "\"");
}

SigmaAlgebra ProblemFile::sigma(const std::string& name) const {
    for (const auto& [key, spec] : sigma_algebras) {
        if (key != name) continue;
        std::vector<Event> sets;
        sets.reserve(spec.sets.size());
        for (const auto& s : spec.sets) sets.emplace_back(s);
        if (spec.kind == SigmaSpec::Kind::Generators)
            return SigmaAlgebra::generate(outcome_count(), sets);
        // Atoms given as lists may repeat an index; Event dedups, so compare sizes.
        for (std::size_t j = 0; j < sets.size(); ++j) {
            if (sets[j].size() != spec.sets[j].size()) {
                std::ostringstream msg;
                msg << "atom " << j << " repeats an outcome";
                throw Error(ErrorCode::InvalidArgument, msg.str());
            }
        }
        return SigmaAlgebra::from_atoms(outcome_count(), std::move(sets));
    }
    throw Error(ErrorCode::UnknownName, "no sigma-algebra named \"" + name + "\"");
}

void ProblemFile::add_variable(std::string name, std::vector<double> values) {
    if (has_variable(name))
        throw Error(ErrorCode::InvalidArgument, "duplicate variable name \"" + name + "\"");
    if (values.size() != outcome_count())
        throw Error(ErrorCode::SizeMismatch, "variable length does not match the outcome count");
    (void)RandomVariable(values);
    variables.emplace_back(std::move(name), std::move(values));
}

void ProblemFile::add_sigma(std::string name, SigmaSpec spec) {
    if (has_sigma(name))
        throw Error(ErrorCode::InvalidArgument, "duplicate sigma-algebra name \"" + name + "\"");
    sigma_algebras.emplace_back(std::move(name), std::move(spec));
    try {
        (void)sigma(sigma_algebras.back().first);
    } catch (...) {
        sigma_algebras.pop_back();
        throw;
    }
}

}  // namespace condexp
