// matrix_io.hpp: plain-text serialization of algebra elements
//
//   blocks K
//   dim N weight W
//   a+bi a+bi ...        (N lines of N entries)
//   ...
//
// Numbers are written with 17 significant digits, so text round-trips are exact.

#pragma once

#include "ncmart/algebra.hpp"

#include <iosfwd>
#include <string>

namespace ncm {

void write_element(std::ostream& os, const Element& x);
Element read_element(std::istream& is);

std::string to_text(const Element& x);
Element from_text(const std::string& text);

std::string format_complex(Complex z);
Complex parse_complex(const std::string& token);

} // namespace ncm
