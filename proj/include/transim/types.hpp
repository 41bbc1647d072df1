#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace transim {

/// Dense index into one of the network's tables. The tag keeps station and
/// line indices from being mixed up.
template <typename Tag>
struct Index {
    std::uint32_t value = 0;

    constexpr Index() = default;
    constexpr explicit Index(std::uint32_t v) : value(v) {}
    constexpr explicit Index(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}
    constexpr explicit Index(int v) : value(static_cast<std::uint32_t>(v)) {}

    constexpr std::size_t get() const { return value; }
    friend constexpr auto operator<=>(const Index&, const Index&) = default;
};

using StationIndex = Index<struct StationTag>;
using LineIndex = Index<struct LineTag>;

struct OdPair {
    StationIndex origin;
    StationIndex destination;
    friend constexpr auto operator<=>(const OdPair&, const OdPair&) = default;
};

/// A boarding location: one line's platform at one station.
struct Platform {
    StationIndex station;
    LineIndex line;
    friend constexpr auto operator<=>(const Platform&, const Platform&) = default;
};

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input data (network, timetable, demand, config).
class ValidationError : public Error {
public:
    using Error::Error;
};

class NoPathError : public Error {
public:
    using Error::Error;
};

class MissingRunTimeError : public Error {
public:
    using Error::Error;
};

class NonFiniteUtilityError : public Error {
public:
    using Error::Error;
};

class InconsistentStateError : public Error {
public:
    using Error::Error;
};

class BinMismatchError : public Error {
public:
    using Error::Error;
};

}  // namespace transim

template <typename Tag>
struct std::hash<transim::Index<Tag>> {
    std::size_t operator()(const transim::Index<Tag>& i) const noexcept { return i.value; }
};
