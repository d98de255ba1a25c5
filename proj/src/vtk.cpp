#include "faultflow/vtk.hpp"

#include "faultflow/error.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

namespace faultflow {

namespace {

int vtk_cell_type(int dim) {
    switch (dim) {
    case 1: return 3;   // VTK_LINE
    case 2: return 5;   // VTK_TRIANGLE
    case 3: return 10;  // VTK_TETRA
    default: throw InputError("no VTK cell type for dimension " + std::to_string(dim));
    }
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

void write_vtk(std::ostream& out, const SimplicialMesh& mesh, const Eigen::VectorXd& pressure,
               const std::vector<Point>& velocity, const std::string& title) {
    const int nc = mesh.num_cells();
    if (pressure.size() != nc || static_cast<int>(velocity.size()) != nc)
        throw InputError("VTK cell data does not match the mesh");
    const int type = vtk_cell_type(mesh.dim());
    out << "# vtk DataFile Version 3.0\n" << (title.empty() ? "faultflow" : title) << "\nASCII\n";
    out << "DATASET UNSTRUCTURED_GRID\nPOINTS " << mesh.num_vertices() << " double\n";
    for (const Point& v : mesh.vertices()) out << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
    out << "CELLS " << nc << ' ' << static_cast<long>(nc) * (mesh.dim() + 2) << '\n';
    for (int c = 0; c < nc; ++c) {
        out << mesh.dim() + 1;
        for (int v : mesh.cell(c)) out << ' ' << v;
        out << '\n';
    }
    out << "CELL_TYPES " << nc << '\n';
    for (int c = 0; c < nc; ++c) out << type << '\n';
    out << "CELL_DATA " << nc << "\nSCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < nc; ++c) out << fmt(pressure[c]) << '\n';
    out << "VECTORS velocity double\n";
    for (const Point& v : velocity) out << fmt(v.x()) << ' ' << fmt(v.y()) << ' ' << fmt(v.z()) << '\n';
}

void write_vtk(const std::string& path, const SimplicialMesh& mesh, const Eigen::VectorXd& pressure,
               const std::vector<Point>& velocity, const std::string& title) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot open " + path + " for writing");
    write_vtk(out, mesh, pressure, velocity, title);
    if (!out) throw InputError("failed writing " + path);
}

namespace {

// Whitespace tokenizer that remembers line numbers.
class Tokens {
public:
    explicit Tokens(std::istream& in) : in_(in) {}

    bool next_line(std::string& text) {
        if (!std::getline(in_, text)) return false;
        ++line_;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        return true;
    }
    std::string word() {
        if (!pending_.empty()) return std::exchange(pending_, {});
        while (!(buf_ >> tok_)) {
            std::string text;
            if (!next_line(text)) throw ParseError(line_, "unexpected end of file");
            buf_.clear();
            buf_.str(text);
        }
        return tok_;
    }
    template <class T> T number() {
        const std::string w = word();
        std::istringstream s(w);
        T v{};
        if (!(s >> v) || !s.eof()) throw ParseError(line_, "expected a number, got '" + w + "'");
        return v;
    }
    bool done() {
        if (!pending_.empty()) return false;
        try {
            pending_ = word();
        } catch (const ParseError&) {
            return true;
        }
        return false;
    }
    int line() const { return line_; }

private:
    std::istream& in_;
    std::istringstream buf_;
    std::string tok_;
    std::string pending_;
    int line_ = 0;
};

void expect(Tokens& t, const std::string& word) {
    const std::string w = t.word();
    if (w != word) throw ParseError(t.line(), "expected '" + word + "', got '" + w + "'");
}

}  // namespace

VtkSummary check_vtk(std::istream& in) {
    Tokens t(in);
    std::string text;
    if (!t.next_line(text) || text.rfind("# vtk DataFile Version", 0) != 0)
        throw ParseError(1, "missing '# vtk DataFile Version' header");
    if (!t.next_line(text)) throw ParseError(2, "missing title line");
    if (!t.next_line(text) || text != "ASCII") throw ParseError(3, "only ASCII files are supported");
    expect(t, "DATASET");
    expect(t, "UNSTRUCTURED_GRID");

    VtkSummary s;
    expect(t, "POINTS");
    s.points = t.number<long>();
    t.word();  // data type
    for (long i = 0; i < 3 * s.points; ++i) t.number<double>();

    expect(t, "CELLS");
    s.cells = t.number<long>();
    const long size = t.number<long>();
    long read = 0;
    for (long c = 0; c < s.cells; ++c) {
        const long n = t.number<long>();
        if (n < 1 || n > 8) throw ParseError(t.line(), "cell " + std::to_string(c) + " has " + std::to_string(n) + " points");
        for (long k = 0; k < n; ++k) {
            const long v = t.number<long>();
            if (v < 0 || v >= s.points) throw ParseError(t.line(), "cell " + std::to_string(c) + " references point " + std::to_string(v));
        }
        read += n + 1;
    }
    if (read != size) throw ParseError(t.line(), "CELLS size " + std::to_string(size) + " does not match " + std::to_string(read));

    expect(t, "CELL_TYPES");
    if (t.number<long>() != s.cells) throw ParseError(t.line(), "CELL_TYPES count differs from CELLS");
    for (long c = 0; c < s.cells; ++c) t.number<int>();

    if (t.done()) return s;
    expect(t, "CELL_DATA");
    if (t.number<long>() != s.cells) throw ParseError(t.line(), "CELL_DATA count differs from CELLS");
    while (!t.done()) {
        const std::string kind = t.word();
        const std::string name = t.word();
        t.word();  // data type
        long width = 0;
        if (kind == "SCALARS") {
            width = 1;
            std::string w = t.word();
            if (w != "LOOKUP_TABLE") {
                width = std::atol(w.c_str());
                if (width < 1 || width > 4) throw ParseError(t.line(), "bad component count '" + w + "'");
                w = t.word();
            }
            if (w != "LOOKUP_TABLE") throw ParseError(t.line(), "expected 'LOOKUP_TABLE', got '" + w + "'");
            t.word();
        } else if (kind == "VECTORS") {
            width = 3;
        } else {
            throw ParseError(t.line(), "unsupported cell data section '" + kind + "'");
        }
        for (long i = 0; i < width * s.cells; ++i) t.number<double>();
        s.arrays.push_back(name);
    }
    return s;
}

VtkSummary check_vtk(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    return check_vtk(in);
}

}  // namespace faultflow
