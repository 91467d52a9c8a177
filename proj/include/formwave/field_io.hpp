#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "formwave/form_field.hpp"

namespace formwave {

// Binary field dump: "FWF1", u32 N, u32 q, u32 n, f64 L, u8 space, then the
// components in basis order, each n^N little-endian (re, im) f64 pairs.

void write_field(std::ostream& out, const FormField& field);
FormField read_field(std::istream& in);

void write_field_file(const std::string& path, const FormField& field);
FormField read_field_file(const std::string& path);
/// Every record in a file of concatenated dumps.
std::vector<FormField> read_field_records(const std::string& path);

}  // namespace formwave
