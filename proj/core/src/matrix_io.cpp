// matrix_io.cpp: textual matrix format

#include "ncmart/matrix_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace ncm {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ParseError("matrix text: bad number '" + s + "' in " + context);
    }
    if (used != s.size()) throw ParseError("matrix text: trailing characters in '" + s + "'");
    return v;
}

void expect_keyword(std::istream& is, const char* keyword) {
    std::string word;
    if (!(is >> word) || word != keyword)
        throw ParseError(std::string("matrix text: expected '") + keyword + "', got '" + word + "'");
}

} // namespace

std::string format_complex(Complex z) {
    std::string out = format_double(z.real());
    out += std::signbit(z.imag()) ? '-' : '+';
    out += format_double(std::fabs(z.imag()));
    out += 'i';
    return out;
}

Complex parse_complex(const std::string& token) {
    if (token.empty()) throw ParseError("matrix text: empty entry");
    if (token.back() != 'i') return {parse_double(token, token), 0.0};
    // The separating sign is the last '+'/'-' that is not a leading sign or part of an exponent.
    std::size_t split = std::string::npos;
    for (std::size_t i = token.size() - 1; i-- > 1;) {
        if ((token[i] == '+' || token[i] == '-') && token[i - 1] != 'e' && token[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    if (split == std::string::npos) {
        // pure imaginary such as "2i" or "-2i"
        return {0.0, parse_double(token.substr(0, token.size() - 1), token)};
    }
    const double re = parse_double(token.substr(0, split), token);
    const std::string im_text = token.substr(split, token.size() - 1 - split);
    return {re, parse_double(im_text, token)};
}

void write_element(std::ostream& os, const Element& x) {
    const auto& spec = x.spec();
    os << "blocks " << spec.block_count() << '\n';
    for (std::size_t b = 0; b < spec.block_count(); ++b) {
        const auto& m = x.block(b);
        os << "dim " << spec.block(b).dim << " weight " << format_double(spec.block(b).weight) << '\n';
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                if (c) os << ' ';
                os << format_complex(m(r, c));
            }
            os << '\n';
        }
    }
}

Element read_element(std::istream& is) {
    expect_keyword(is, "blocks");
    long count = 0;
    if (!(is >> count) || count < 1) throw ParseError("matrix text: bad block count");
    std::vector<Block> blocks;
    std::vector<Matrix> data;
    for (long b = 0; b < count; ++b) {
        expect_keyword(is, "dim");
        int dim = 0;
        if (!(is >> dim) || dim < 1) throw ParseError("matrix text: bad block dimension");
        expect_keyword(is, "weight");
        std::string wtext;
        if (!(is >> wtext)) throw ParseError("matrix text: missing weight");
        const double w = parse_double(wtext, "weight");
        Matrix m(dim, dim);
        for (int r = 0; r < dim; ++r) {
            for (int c = 0; c < dim; ++c) {
                std::string tok;
                if (!(is >> tok)) throw ParseError("matrix text: truncated block");
                m(r, c) = parse_complex(tok);
            }
        }
        blocks.push_back({dim, w});
        data.push_back(std::move(m));
    }
    try {
        return Element(AlgebraSpec(std::move(blocks)), std::move(data));
    } catch (const DomainError& e) {
        throw ParseError(std::string("matrix text: ") + e.what());
    }
}

std::string to_text(const Element& x) {
    std::ostringstream os;
    write_element(os, x);
    return os.str();
}

Element from_text(const std::string& text) {
    std::istringstream is(text);
    return read_element(is);
}

} // namespace ncm
