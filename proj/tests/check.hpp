#pragma once

#include <optional>

#include "wpscat/error.hpp"

/// Code of the wpscat::Error thrown by f, or nullopt if nothing was thrown.
template <class F>
std::optional<wpscat::ErrorCode> thrown_code(F&& f)
{
    try {
        f();
    } catch (const wpscat::Error& e) {
        return e.code();
    }
    return std::nullopt;
}
