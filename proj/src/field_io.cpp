#include "formwave/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "formwave/errors.hpp"

namespace formwave {

namespace {

constexpr char magic[4] = {'F', 'W', 'F', '1'};

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  in.read(reinterpret_cast<char*>(bytes), sizeof(T));
  require(static_cast<bool>(in), ErrorCode::io_error, "truncated field dump");
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(bytes[i], bytes[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_field(std::ostream& out, const FormField& field) {
  require(field.rank() >= 0 && field.rank() <= field.grid().dim(), ErrorCode::rank_overflow,
          "only ranks 0..N can be written");
  out.write(magic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.rank()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(field.grid().points_per_axis()));
  put<double>(out, field.grid().half_width());
  put<std::uint8_t>(out, static_cast<std::uint8_t>(field.space()));
  for (const cplx& v : field.data()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  require(static_cast<bool>(out), ErrorCode::io_error, "failed writing field dump");
}

FormField read_field(std::istream& in) {
  char tag[4];
  in.read(tag, 4);
  require(static_cast<bool>(in) && std::memcmp(tag, magic, 4) == 0, ErrorCode::io_error,
          "missing FWF1 magic");
  const auto dim = get<std::uint32_t>(in);
  const auto rank = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto half_width = get<double>(in);
  const auto space = get<std::uint8_t>(in);
  require(space <= 1, ErrorCode::io_error, "invalid space flag in field dump");
  require(rank <= dim, ErrorCode::io_error, "rank exceeds dimension in field dump");
  FormField field(GridSpec(static_cast<int>(dim), static_cast<int>(n), half_width),
                  static_cast<int>(rank), static_cast<Space>(space));
  for (cplx& v : field.data()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return field;
}

void write_field_file(const std::string& path, const FormField& field) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::io_error, "cannot open " + path + " for writing");
  write_field(out, field);
}

FormField read_field_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot open " + path);
  return read_field(in);
}

std::vector<FormField> read_field_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io_error, "cannot open " + path);
  std::vector<FormField> records;
  while (in.peek() != std::char_traits<char>::eof()) records.push_back(read_field(in));
  return records;
}

}  // namespace formwave
