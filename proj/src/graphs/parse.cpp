#include "xlab/errors.hpp"
#include "xlab/graph.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace xlab {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view token, int& out) {
    const auto* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(token.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

} // namespace

Graph parse_graph(std::string_view text) {
    std::optional<int> declared;
    std::vector<Edge> edges;
    int max_index = -1;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.starts_with("n=")) {
            int n = 0;
            if (declared || !edges.empty() || !parse_int(trim(line.substr(2)), n) || n < 0)
                throw ParseError("bad header '" + std::string(line) + "'", line_no);
            declared = n;
            continue;
        }
        const auto split = line.find_first_of(" \t");
        if (split == std::string_view::npos)
            throw ParseError("expected two vertex indices", line_no);
        int u = 0;
        int v = 0;
        if (!parse_int(trim(line.substr(0, split)), u) || !parse_int(trim(line.substr(split)), v) || u < 0 || v < 0)
            throw ParseError("expected two nonnegative integers, got '" + std::string(line) + "'", line_no);
        if (u == v)
            throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
        if (declared && (u >= *declared || v >= *declared))
            throw ParseError("vertex index exceeds header n=" + std::to_string(*declared), line_no);
        max_index = std::max({max_index, u, v});
        edges.emplace_back(u, v);
    }
    return Graph(declared.value_or(max_index + 1), std::move(edges));
}

Graph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

Bigraph parse_bigraph_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("bigraph JSON: ") + e.what());
    }
    try {
        const int left = doc.at("left").get<int>();
        const int right = doc.at("right").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw ParseError("bigraph edge must be a [left, right] pair");
            edges.emplace_back(e[0].get<int>(), e[1].get<int>());
        }
        return Bigraph(left, right, std::move(edges));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bigraph JSON: ") + e.what());
    }
}

Bigraph load_bigraph(const std::string& path) { return parse_bigraph_json(read_file(path)); }

std::string to_edge_list(const Graph& g) {
    std::string out = "n=" + std::to_string(g.vertex_count()) + "\n";
    for (const auto& [u, v] : g.edges())
        out += std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

} // namespace xlab
