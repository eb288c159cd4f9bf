#pragma once

#include <functional>

#include "lamlab/numeric.hpp"

// Returns the code of the lamlab::Error thrown by fn, or nullopt-like sentinel -1.
inline int error_code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const lamlab::Error& e) {
        return static_cast<int>(e.code());
    }
    return -1;
}

#define CHECK_THROWS_CODE(expr, code) CHECK(error_code_of([&] { (void)(expr); }) == static_cast<int>(code))
