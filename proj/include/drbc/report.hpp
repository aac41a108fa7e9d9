#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ideal.hpp"

namespace drbc {

using json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Deviation, Info };

inline const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Deviation: return "deviation";
        case Status::Info: return "info";
    }
    return "?";
}

struct CheckResult {
    std::string check_id;
    std::string ref;  // the statement being checked, in words
    Status status = Status::Pass;
    json witness;     // counterexample or supporting data, may be null
};

class Report {
public:
    void add(std::string id, std::string ref, Status st, json witness = nullptr) {
        items_.push_back({std::move(id), std::move(ref), st, std::move(witness)});
    }
    void check(std::string id, std::string ref, bool ok, json witness = nullptr) {
        add(std::move(id), std::move(ref), ok ? Status::Pass : Status::Fail, ok ? json(nullptr) : std::move(witness));
    }
    void merge(const Report& o) { items_.insert(items_.end(), o.items_.begin(), o.items_.end()); }

    const std::vector<CheckResult>& items() const { return items_; }
    bool any_fatal() const {
        for (auto& c : items_)
            if (c.status == Status::Fail) return true;
        return false;
    }
    bool all_pass() const {
        for (auto& c : items_)
            if (c.status == Status::Fail || c.status == Status::Deviation) return false;
        return true;
    }
    std::size_t count(Status s) const {
        std::size_t n = 0;
        for (auto& c : items_) n += c.status == s;
        return n;
    }

    json to_json() const {
        json arr = json::array();
        for (auto& c : items_) {
            json j;
            j["check_id"] = c.check_id;
            j["paper_ref"] = c.ref;
            j["status"] = status_name(c.status);
            if (!c.witness.is_null()) j["witness"] = c.witness;
            arr.push_back(j);
        }
        return arr;
    }

private:
    std::vector<CheckResult> items_;
};

inline json ideal_json(const IntegralIdeal& I) { return json::array({I.a, I.c, I.d}); }

}  // namespace drbc
