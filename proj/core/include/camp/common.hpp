#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace camp {

/// Base of every error the library raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a schema, an invariant, or an operation precondition.
/// The CLI maps this to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A malformed CSV/JSON row. Carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(std::string source, std::size_t line, const std::string& what);

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] const std::string& source() const noexcept { return source_; }

private:
    std::string source_;
    std::size_t line_;
};

/// File could not be opened, read, or written. The CLI maps this to exit code 3.
class IoError : public Error {
public:
    using Error::Error;
};

using PlayerId = std::string;
using TeamId = std::string;
using MatchId = std::string;

enum class VenueClass { Asia = 0, NonAsia = 1 };

[[nodiscard]] std::string_view to_string(VenueClass v) noexcept;
[[nodiscard]] std::optional<VenueClass> parse_venue_class(std::string_view s) noexcept;

inline constexpr int kOversPerInnings = 50;
inline constexpr int kBallsPerOver = 6;
inline constexpr int kPlayersPerSide = 11;
inline constexpr int kMaxOversPerBowler = 10;

/// Shortest decimal text that round-trips to the same double.
[[nodiscard]] std::string format_double(double v);

/// Fixed-point text with `digits` decimals; used for human-facing reports.
[[nodiscard]] std::string format_fixed(double v, int digits);

[[nodiscard]] double parse_double(std::string_view s, const char* field);
[[nodiscard]] long long parse_int(std::string_view s, const char* field);

/// 64-bit FNV-1a over the bytes of `data`.
[[nodiscard]] std::uint64_t fnv1a64(std::string_view data,
                                    std::uint64_t seed = 0xcbf29ce484222325ULL) noexcept;

[[nodiscard]] std::string hex64(std::uint64_t v);

/// SplitMix64 finaliser. Used to derive independent child seeds from a root seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept;

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
/// std::uniform_real_distribution is implementation-defined; this is not.
[[nodiscard]] double unit_uniform(Rng& rng) noexcept;

/// Uniform integer in [0, n) by modulo reduction (bias is negligible for small n).
[[nodiscard]] std::size_t uniform_index(Rng& rng, std::size_t n) noexcept;

[[nodiscard]] std::string_view library_version() noexcept;

}  // namespace camp
