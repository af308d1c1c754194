#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>

#include "finpred/errors.hpp"

namespace finpred {

/// Calendar day. Business-day arithmetic elsewhere is positional (index into a
/// series), so this type only needs ordering, ISO formatting, and weekday info.
struct Date {
    int y = 1970;
    int m = 1;
    int d = 1;

    auto operator<=>(const Date&) const = default;

    std::chrono::sys_days to_sys_days() const {
        using namespace std::chrono;
        return sys_days{year{y} / month{static_cast<unsigned>(m)} / day{static_cast<unsigned>(d)}};
    }

    bool is_weekday() const {
        const std::chrono::weekday wd{to_sys_days()};
        return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
    }

    Date next_day() const {
        using namespace std::chrono;
        const year_month_day ymd{to_sys_days() + days{1}};
        return Date{static_cast<int>(ymd.year()), static_cast<int>(unsigned(ymd.month())),
                    static_cast<int>(unsigned(ymd.day()))};
    }

    Date next_weekday() const {
        Date n = next_day();
        while (!n.is_weekday()) n = n.next_day();
        return n;
    }

    std::string to_string() const {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", y, m, d);
        return std::string(buf);
    }

    bool valid() const {
        using namespace std::chrono;
        return (year{y} / month{static_cast<unsigned>(m)} / day{static_cast<unsigned>(d)}).ok();
    }
};

inline Date parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &extra) != 3) {
        throw DataError("invalid ISO-8601 date: '" + s + "'");
    }
    const Date date{y, m, d};
    if (!date.valid()) throw DataError("invalid calendar date: '" + s + "'");
    return date;
}

}  // namespace finpred
