#pragma once

#include <gtest/gtest.h>

#include "drbc/suite.hpp"

namespace drbc::test {

// One context per field, shared across the tests of a binary.
inline FieldContext& field(Int m) {
    static std::map<Int, std::unique_ptr<FieldContext>> cache;
    auto it = cache.find(m);
    if (it == cache.end()) it = cache.emplace(m, std::make_unique<FieldContext>(m)).first;
    return *it->second;
}

inline IntegralIdeal gen(Int m, Int x0, Int x1) { return principal(NumberField::from_tag(m), Elem{x0, x1}); }

inline IntegralIdeal q(Int n) { return {n, 0, 1}; }

inline void expect_clean(const Report& r) {
    EXPECT_FALSE(r.items().empty());
    for (auto& c : r.items()) EXPECT_NE(c.status, Status::Fail) << c.check_id << " " << c.witness.dump();
}

inline void expect_all_pass(const Report& r) {
    EXPECT_FALSE(r.items().empty());
    for (auto& c : r.items())
        EXPECT_TRUE(c.status == Status::Pass || c.status == Status::Info) << c.check_id << " " << c.witness.dump();
}

inline Status status_of(const Report& r, const std::string& prefix) {
    for (auto& c : r.items())
        if (c.check_id.rfind(prefix, 0) == 0) return c.status;
    throw std::out_of_range("no check " + prefix);
}

}  // namespace drbc::test
