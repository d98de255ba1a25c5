#include "faultflow/error.hpp"
#include "faultflow/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace faultflow {

namespace {

const std::array<const char*, 4> kDomainNames{"omega", "mu_left", "mu_right", "gamma"};

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <class T>
T parse_number(std::string_view tok, int line) {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(line, "invalid number '" + std::string(tok) + "'");
    return value;
}

struct DomainBlock {
    int dim = 0;
    std::vector<Point> vertices;
    std::vector<int> cells;
    std::vector<std::pair<int, std::string>> tags;
    int header_line = 0;
};

struct InterfaceBlock {
    std::string from, to;
    Side side = Side::left;
    std::vector<InterfacePair> pairs;
    int header_line = 0;
};

// Parses `key=value` attributes from a section header (after the name).
std::map<std::string, std::string> attributes(const std::vector<std::string_view>& toks, int line) {
    std::map<std::string, std::string> out;
    for (std::size_t k = 2; k < toks.size(); ++k) {
        std::string_view t = toks[k];
        if (!t.empty() && t.back() == ']') t.remove_suffix(1);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string_view::npos) throw ParseError(line, "expected key=value, got '" + std::string(t) + "'");
        out[std::string(t.substr(0, eq))] = std::string(t.substr(eq + 1));
    }
    return out;
}

void write_domain(std::ostream& out, const char* name, const SimplicialMesh& mesh) {
    char buf[128];
    out << "[domain " << name << " dim=" << mesh.dim() << "]\n";
    for (const auto& v : mesh.vertices()) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (int c = 0; c < mesh.num_cells(); ++c) {
        out << 'c';
        for (int v : mesh.cell(c)) out << ' ' << v;
        out << '\n';
    }
    for (const auto& [f, tag] : mesh.boundary_tags())
        if (tag.rfind("interface_", 0) != 0) out << "b " << f << ' ' << tag << '\n';
}

void write_interface(std::ostream& out, const char* name, const char* from, const char* to,
                     const InterfaceMap& map) {
    out << "[interface " << name << " from=" << from << " to=" << to << " side=" << to_string(map.side)
        << "]\n";
    for (const auto& p : map.pairs) {
        out << "p " << p.higher << ' ' << p.lower;
        if (p.orientation != 1) out << ' ' << p.orientation;
        out << '\n';
    }
}

}  // namespace

void write_geometry(std::ostream& out, const MixedDimGeometry& geometry) {
    out << "# faultflow mixed-dimensional geometry\n";
    write_domain(out, "omega", geometry.omega);
    write_domain(out, "mu_left", geometry.mu_left);
    write_domain(out, "mu_right", geometry.mu_right);
    write_domain(out, "gamma", geometry.gamma);
    write_interface(out, "m_left", "omega", "mu_left", geometry.m_left);
    write_interface(out, "m_right", "omega", "mu_right", geometry.m_right);
    write_interface(out, "g_left", "mu_left", "gamma", geometry.g_left);
    write_interface(out, "g_right", "mu_right", "gamma", geometry.g_right);
}

MixedDimGeometry read_geometry(std::istream& in) {
    std::map<std::string, DomainBlock> domains;
    std::vector<InterfaceBlock> interfaces;
    DomainBlock* dom = nullptr;
    InterfaceBlock* itf = nullptr;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto toks = split(line);
        if (toks.empty()) continue;

        if (toks[0].front() == '[') {
            if (toks.size() < 2) throw ParseError(line_no, "incomplete section header");
            const auto kind = toks[0].substr(1);
            std::string name(toks[1]);
            if (!name.empty() && name.back() == ']') name.pop_back();
            const auto attrs = attributes(toks, line_no);
            if (kind == "domain") {
                if (domains.count(name)) throw ParseError(line_no, "duplicate domain '" + name + "'");
                if (std::find(kDomainNames.begin(), kDomainNames.end(), name) == kDomainNames.end())
                    throw ParseError(line_no, "unknown domain '" + name + "'");
                auto it = attrs.find("dim");
                if (it == attrs.end()) throw ParseError(line_no, "domain header needs dim=<d>");
                DomainBlock block;
                block.dim = parse_number<int>(it->second, line_no);
                if (block.dim < 1 || block.dim > 3) throw ParseError(line_no, "dim must be 1, 2 or 3");
                block.header_line = line_no;
                dom = &(domains[name] = std::move(block));
                itf = nullptr;
            } else if (kind == "interface") {
                InterfaceBlock block;
                block.header_line = line_no;
                for (const char* key : {"from", "to", "side"})
                    if (!attrs.count(key))
                        throw ParseError(line_no, std::string("interface header needs ") + key + "=");
                block.from = attrs.at("from");
                block.to = attrs.at("to");
                const auto& side = attrs.at("side");
                if (side == "left") block.side = Side::left;
                else if (side == "right") block.side = Side::right;
                else throw ParseError(line_no, "side must be left or right");
                interfaces.push_back(std::move(block));
                itf = &interfaces.back();
                dom = nullptr;
            } else {
                throw ParseError(line_no, "unknown section kind '" + std::string(kind) + "'");
            }
            continue;
        }

        const auto key = toks[0];
        if (key == "v") {
            if (!dom) throw ParseError(line_no, "vertex outside a domain section");
            if (toks.size() != 4) throw ParseError(line_no, "vertex line needs 3 coordinates");
            dom->vertices.emplace_back(parse_number<double>(toks[1], line_no),
                                       parse_number<double>(toks[2], line_no),
                                       parse_number<double>(toks[3], line_no));
        } else if (key == "c") {
            if (!dom) throw ParseError(line_no, "cell outside a domain section");
            if (static_cast<int>(toks.size()) != dom->dim + 2)
                throw ParseError(line_no, "cell line needs " + std::to_string(dom->dim + 1) + " indices");
            for (std::size_t k = 1; k < toks.size(); ++k) {
                const int v = parse_number<int>(toks[k], line_no);
                if (v < 0) throw ParseError(line_no, "negative vertex index");
                dom->cells.push_back(v);
            }
        } else if (key == "b") {
            if (!dom) throw ParseError(line_no, "boundary tag outside a domain section");
            if (toks.size() != 3) throw ParseError(line_no, "tag line is 'b face label'");
            dom->tags.emplace_back(parse_number<int>(toks[1], line_no), std::string(toks[2]));
        } else if (key == "p") {
            if (!itf) throw ParseError(line_no, "pair outside an interface section");
            if (toks.size() != 3 && toks.size() != 4) throw ParseError(line_no, "pair line is 'p higher lower'");
            InterfacePair p;
            p.higher = parse_number<int>(toks[1], line_no);
            p.lower = parse_number<int>(toks[2], line_no);
            if (toks.size() == 4) p.orientation = parse_number<int>(toks[3], line_no);
            itf->pairs.push_back(p);
        } else {
            throw ParseError(line_no, "unknown line kind '" + std::string(key) + "'");
        }
    }

    for (const char* name : kDomainNames)
        if (!domains.count(name)) throw ParseError(line_no, std::string("missing domain '") + name + "'");

    MixedDimGeometry geo;
    auto build = [&](const char* name) {
        DomainBlock& b = domains.at(name);
        SimplicialMesh mesh = SimplicialMesh::from_cells(b.dim, std::move(b.vertices), std::move(b.cells));
        for (const auto& [f, tag] : b.tags) mesh.set_boundary_tag(f, tag);
        return mesh;
    };
    geo.omega = build("omega");
    geo.mu_left = build("mu_left");
    geo.mu_right = build("mu_right");
    geo.gamma = build("gamma");

    std::array<bool, 4> seen{};
    for (auto& block : interfaces) {
        const std::string mu_name = std::string("mu_") + to_string(block.side);
        int slot = -1;
        if (block.from == "omega" && block.to == mu_name) slot = static_cast<int>(block.side);
        else if (block.from == mu_name && block.to == "gamma") slot = 2 + static_cast<int>(block.side);
        else
            throw ParseError(block.header_line, "interface from=" + block.from + " to=" + block.to +
                                                    " is not valid for side=" + to_string(block.side));
        if (seen[slot]) throw ParseError(block.header_line, "duplicate interface section");
        seen[slot] = true;
        InterfaceMap& target = slot < 2 ? geo.m(block.side) : geo.g(block.side);
        target.side = block.side;
        target.pairs = std::move(block.pairs);
    }
    for (int k = 0; k < 4; ++k)
        if (!seen[k]) throw ParseError(line_no, "missing interface section");

    for (Side s : kSides) {
        for (const auto& p : geo.m(s).pairs) {
            if (p.higher < 0 || p.higher >= geo.omega.num_faces())
                throw TopologyError(std::string("m_") + to_string(s) + ": omega face " +
                                    std::to_string(p.higher) + " out of range");
            const auto& tag = geo.omega.boundary_tag(p.higher);
            if (!tag.empty() && tag != interface_tag(s))
                throw TopologyError("omega face " + std::to_string(p.higher) + " is tagged '" + tag +
                                    "' but belongs to an interface");
            if (!geo.omega.is_boundary_face(p.higher))
                throw TopologyError(std::string("m_") + to_string(s) + ": omega face " +
                                    std::to_string(p.higher) + " is interior");
            geo.omega.set_boundary_tag(p.higher, interface_tag(s));
        }
    }
    geo.validate();
    return geo;
}

MixedDimGeometry import_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open mesh file '" + path + "'");
    return read_geometry(in);
}

void export_mesh(const std::string& path, const MixedDimGeometry& geometry) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file '" + path + "'");
    write_geometry(out, geometry);
}

}  // namespace faultflow
