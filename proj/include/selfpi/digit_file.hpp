#pragma once
// digit_file.hpp - the shared digit-file format: ASCII, optional sign,
// integer part, '.', fraction digits, optional trailing newline, no
// separators.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "selfpi/errors.hpp"
#include "selfpi/fixed_real.hpp"

namespace selfpi {

inline std::string read_digit_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open digit file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    detail::parse_decimal(text);  // validate format; throws ParseError
    return text;
}

inline void write_digit_file(const std::string& path, std::string_view digits) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ParseError("cannot create digit file: " + path);
    out << digits << '\n';
    if (!out) throw ParseError("write failed: " + path);
}

}  // namespace selfpi
