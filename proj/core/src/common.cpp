#include "camp/common.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

#ifndef CAMP_VERSION
#define CAMP_VERSION "0.0.0"
#endif

namespace camp {

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : ValidationError(source + ":" + std::to_string(line) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

std::string_view to_string(VenueClass v) noexcept {
    return v == VenueClass::Asia ? "Asia" : "NonAsia";
}

std::optional<VenueClass> parse_venue_class(std::string_view s) noexcept {
    if (s == "Asia") return VenueClass::Asia;
    if (s == "NonAsia") return VenueClass::NonAsia;
    return std::nullopt;
}

std::string format_double(double v) {
    if (v == 0.0) return "0";  // folds -0 into 0 so outputs stay byte-stable
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error("format_double: conversion failed");
    return std::string(buf.data(), ptr);
}

std::string format_fixed(double v, int digits) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::fixed, digits);
    if (ec != std::errc{}) throw Error("format_fixed: conversion failed");
    std::string out(buf.data(), ptr);
    // "-0.00" -> "0.00"
    if (!out.empty() && out.front() == '-' &&
        out.find_first_not_of("-0.") == std::string::npos) {
        out.erase(out.begin());
    }
    return out;
}

double parse_double(std::string_view s, const char* field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ValidationError(std::string("field '") + field + "': not a number: '" +
                              std::string(s) + "'");
    }
    return v;
}

long long parse_int(std::string_view s, const char* field) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ValidationError(std::string("field '") + field + "': not an integer: '" +
                              std::string(s) + "'");
    }
    return v;
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed) noexcept {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    std::array<char, 17> buf{};
    std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf.data(), 16);
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept {
    std::uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double unit_uniform(Rng& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) noexcept {
    return n == 0 ? 0 : static_cast<std::size_t>(rng() % n);
}

std::string_view library_version() noexcept { return CAMP_VERSION; }

}  // namespace camp
