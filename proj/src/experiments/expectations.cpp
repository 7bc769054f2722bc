#include "xlab/errors.hpp"
#include "xlab/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace xlab {

using nlohmann::json;

Expectations Expectations::load(const std::filesystem::path& path) {
    Expectations out;
    std::ifstream in(path);
    if (!in)
        return out;
    std::ostringstream buf;
    buf << in.rdbuf();
    json doc;
    try {
        doc = json::parse(buf.str());
        for (const auto& [key, v] : doc.at("entries").items()) {
            Expectation e;
            e.value = v.at("expected").is_string() ? v.at("expected").get<std::string>() : v.at("expected").dump();
            e.tol = v.at("tol").get<double>();
            e.relation = v.at("relation").get<std::string>();
            e.provenance = v.at("provenance").get<std::string>();
            out.set(key, e);
        }
    } catch (const json::exception& e) {
        throw ParseError("malformed expectations file '" + path.string() + "': " + e.what());
    }
    return out;
}

void Expectations::save(const std::filesystem::path& path) const {
    json entries = json::object();
    for (const auto& [key, e] : entries_)
        entries[key] = {{"expected", e.value}, {"tol", e.tol}, {"relation", e.relation}, {"provenance", e.provenance}};
    json doc = {{"version", 1}, {"entries", entries}};
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write expectations file '" + path.string() + "'");
    out << doc.dump(2) << '\n';
}

std::optional<Expectation> Expectations::find(const std::string& key) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const auto& entry, const std::string& k) { return entry.first < k; });
    if (it != entries_.end() && it->first == key)
        return it->second;
    return std::nullopt;
}

void Expectations::set(const std::string& key, const Expectation& e) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), key,
                               [](const auto& entry, const std::string& k) { return entry.first < k; });
    if (it != entries_.end() && it->first == key)
        it->second = e;
    else
        entries_.insert(it, {key, e});
}

std::filesystem::path default_expectations_path() {
#ifdef XLAB_DATA_DIR
    return std::filesystem::path(XLAB_DATA_DIR) / "expectations.json";
#else
    return "data/expectations.json";
#endif
}

} // namespace xlab
