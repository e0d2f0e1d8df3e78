#pragma once

#include <optional>
#include <span>

#include "ietx/dynamics.hpp"

namespace ietx::detail {

// Runs one start through the ladder: orbit, Birkhoff sums of `family`,
// D*_N at each ladder point and the visited-bin count over the whole orbit.
OrbitDiagnostics trace_generic(const Iet& t, const Scalar& x0, std::span<const std::uint64_t> ladder,
                               std::span<const TestFunction> family, std::size_t bins);

// Same contract on word-sized fixed-point arithmetic; nullopt when the IET
// is not fixed point or its precision exceeds the compiled word widths.
std::optional<OrbitDiagnostics> trace_fixed(const Iet& t, const Scalar& x0,
                                            std::span<const std::uint64_t> ladder,
                                            std::span<const TestFunction> family, std::size_t bins);

}  // namespace ietx::detail
