#include "mabk/state_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mabk {

const char* const kCurveCsvHeader = "m,F,G,numeric_HXE,numeric_HXY,thm2_note";

namespace {

double parse_double(const std::string& tok, const char* what) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw ParseError(std::string("invalid ") + what + ": '" + tok + "'");
    return v;
}

}  // namespace

ComplexMatrix read_state_file(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty state file");
    std::istringstream header(line);
    std::string magic;
    int version = 0;
    std::size_t dim = 0;
    header >> magic >> version >> dim;
    if (magic != "QSTATE" || version != 1 || dim == 0 || header.fail())
        throw ParseError("bad header, expected 'QSTATE 1 <dim>'");

    ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        if (!std::getline(in, line)) throw ParseError("unexpected end of file in row " + std::to_string(r));
        std::istringstream row(line);
        std::string tok;
        for (std::size_t c = 0; c < dim; ++c) {
            if (!(row >> tok)) throw ParseError("row " + std::to_string(r) + " has too few entries");
            const auto comma = tok.find(',');
            if (comma == std::string::npos) throw ParseError("entry missing ',' separator: '" + tok + "'");
            const double re = parse_double(tok.substr(0, comma), "real part");
            const double im = parse_double(tok.substr(comma + 1), "imaginary part");
            m(r, c) = cplx(re, im);
        }
        if (row >> tok) throw ParseError("row " + std::to_string(r) + " has too many entries");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] != '#') throw ParseError("trailing content is not a comment: '" + line + "'");
    }
    return m;
}

ComplexMatrix read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open state file: " + path);
    return read_state_file(in);
}

void write_state_file(std::ostream& out, const ComplexMatrix& m, const std::string& comment) {
    out << "QSTATE 1 " << m.rows() << "\n";
    char buf[64];
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", m(r, c).real(), m(r, c).imag());
            out << buf;
        }
        out << "\n";
    }
    if (!comment.empty()) out << "# " << comment << "\n";
}

std::string format_sig12(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    for (int prec = 1; prec <= 12; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string emit_curve_csv(const std::vector<CurveRow>& rows) {
    std::ostringstream out;
    out << kCurveCsvHeader << "\n";
    for (const auto& row : rows) {
        out << format_sig12(row.m) << ',';
        if (row.F) out << format_sig12(*row.F);
        out << ',';
        if (row.G) out << format_sig12(*row.G);
        out << ',';
        if (row.numeric_hxe) out << format_sig12(*row.numeric_hxe);
        out << ',';
        if (row.numeric_hxy) out << format_sig12(*row.numeric_hxy);
        out << ',' << row.thm2_note << "\n";
    }
    return out.str();
}

std::vector<CurveRow> parse_curve_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCurveCsvHeader)
        throw ParseError("bad CSV header");
    std::vector<CurveRow> rows;
    double prev_m = -1e300;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (int i = 0; i < 5; ++i) {
            const auto comma = line.find(',', start);
            if (comma == std::string::npos) throw ParseError("row has too few cells: '" + line + "'");
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        cells.push_back(line.substr(start));
        CurveRow row;
        row.m = parse_double(cells[0], "m");
        if (row.m <= prev_m) throw ParseError("m values must be strictly increasing");
        prev_m = row.m;
        auto opt = [&](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return parse_double(s, "cell");
        };
        row.F = opt(cells[1]);
        row.G = opt(cells[2]);
        row.numeric_hxe = opt(cells[3]);
        row.numeric_hxy = opt(cells[4]);
        row.thm2_note = cells[5];
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mabk
