#pragma once

#include "sqnm/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

// Asserts that `stmt` throws sqnm::Error of the given kind.
#define EXPECT_SQNM_ERROR(stmt, expected_kind)                                              \
    do {                                                                                    \
        try {                                                                               \
            (void)(stmt);                                                                   \
            ADD_FAILURE() << "expected " << ::sqnm::to_string(expected_kind) << " error";   \
        } catch (const ::sqnm::Error& e) {                                                  \
            EXPECT_EQ(e.kind(), expected_kind) << e.what();                                 \
        }                                                                                   \
    } while (0)

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    double scale = 0.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(scale, 1e-300));
    return a.size() == b.size() ? worst : INFINITY;
}
