#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hgsim {

// Grid coordinate. Ordering is row-major, (y, x), which is also the
// deterministic tie-break order used everywhere in the simulator.
struct CellPos {
    int x = 0;
    int y = 0;

    friend bool operator==(CellPos a, CellPos b) noexcept = default;
    friend std::strong_ordering operator<=>(CellPos a, CellPos b) noexcept {
        return std::tie(a.y, a.x) <=> std::tie(b.y, b.x);
    }
};

inline int manhattan(CellPos a, CellPos b) noexcept {
    return std::abs(a.x - b.x) + std::abs(a.y - b.y);
}

std::string to_string(CellPos p);

// True content of a ground-truth cell as seen by a sensor.
enum class CellKind : std::uint8_t { Free, Obstacle, Task };

struct Observation {
    CellPos pos;
    CellKind kind = CellKind::Free;
    int task_id = -1;  // valid when kind == Task
};

using Rng = std::mt19937_64;

// Uniform integer in [0, n). Rejection sampling so the stream is identical
// across standard library implementations.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: empty range");
    const std::uint64_t limit = Rng::max() - (Rng::max() % n);
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace hgsim
