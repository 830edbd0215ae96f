#include "pcgbench/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "pcgbench/errors.hpp"

namespace pcgbench {

namespace {

std::string lowercase(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string_view skip_ws(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    return s;
}

template <typename T>
bool parse_next(std::string_view& s, T& out)
{
    s = skip_ws(s);
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{}) {
        return false;
    }
    s.remove_prefix(static_cast<std::size_t>(ptr - first));
    return true;
}

bool blank_or_comment(std::string_view s)
{
    s = skip_ws(s);
    return s.empty() || s.front() == '%';
}

}  // namespace

SparseMatrix read_matrix_market(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    return read_matrix_market(in);
}

SparseMatrix read_matrix_market(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty Matrix Market stream");
    }
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lowercase(object) != "matrix") {
        throw ParseError("missing %%MatrixMarket matrix banner");
    }
    if (lowercase(format) != "coordinate") {
        throw ParseError("only coordinate format is supported, got '" + format + "'");
    }
    field = lowercase(field);
    if (field != "real" && field != "integer") {
        throw ParseError("unsupported field '" + field + "' (need real)");
    }
    symmetry = lowercase(symmetry);
    const bool sym = symmetry == "symmetric";
    if (!sym && symmetry != "general") {
        throw ParseError("unsupported symmetry '" + symmetry + "'");
    }

    long long rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        if (blank_or_comment(line)) {
            continue;
        }
        std::string_view s(line);
        if (!parse_next(s, rows) || !parse_next(s, cols) || !parse_next(s, nnz) || rows < 0 ||
            cols < 0 || nnz < 0) {
            throw ParseError("malformed size line: '" + line + "'");
        }
        break;
    }
    if (rows < 0) {
        throw ParseError("missing size line");
    }
    if (rows != cols) {
        throw ParseError("matrix is not square (" + std::to_string(rows) + "x" +
                         std::to_string(cols) + ")");
    }

    std::vector<Triplet> t;
    t.reserve(static_cast<std::size_t>(sym ? 2 * nnz : nnz));
    long long read = 0;
    while (read < nnz && std::getline(in, line)) {
        if (blank_or_comment(line)) {
            continue;
        }
        std::string_view s(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!parse_next(s, i) || !parse_next(s, j) || !parse_next(s, v)) {
            throw ParseError("malformed entry line: '" + line + "'");
        }
        if (i < 1 || i > rows || j < 1 || j > cols) {
            throw ParseError("index out of range: '" + line + "'");
        }
        const Index r = i - 1;
        const Index c = j - 1;
        t.push_back({r, c, v});
        if (sym && r != c) {
            t.push_back({c, r, v});
        }
        ++read;
    }
    if (read != nnz) {
        throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                         std::to_string(read));
    }
    return SparseMatrix::from_triplets(rows, std::move(t));
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrix& a)
{
    std::ofstream out(path);
    if (!out) {
        throw ParseError("cannot write " + path.string());
    }
    write_matrix_market(out, a);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& a)
{
    const bool sym = a.symmetric();
    Index count = 0;
    for (Index i = 0; i < a.n(); ++i) {
        for (const Index j : a.row_cols(i)) {
            count += (!sym || j <= i) ? 1 : 0;
        }
    }
    out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
    out << a.n() << ' ' << a.n() << ' ' << count << '\n';
    char buf[64];
    for (Index i = 0; i < a.n(); ++i) {
        const auto cols = a.row_cols(i);
        const auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (sym && cols[k] > i) {
                continue;
            }
            std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
            out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << buf << '\n';
        }
    }
}

Vector read_vector_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    Vector v;
    std::string line;
    while (std::getline(in, line)) {
        if (blank_or_comment(line)) {
            continue;
        }
        std::string_view s(line);
        double x = 0.0;
        if (!parse_next(s, x) || !skip_ws(s).empty()) {
            throw ParseError("malformed value line: '" + line + "'");
        }
        v.push_back(x);
    }
    return v;
}

}  // namespace pcgbench
