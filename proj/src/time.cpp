#include "riskflow/time.hpp"

#include <charconv>
#include <cstdio>

#include "riskflow/error.hpp"

namespace riskflow {

namespace {

int read_digits(std::string_view text, std::size_t pos, std::size_t count) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + count, value);
    if (ec != std::errc{} || ptr != text.data() + pos + count) {
        throw Error("ParseError", "malformed date/time: '" + std::string(text) + "'");
    }
    return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
    if (text[pos] != c) {
        throw Error("ParseError", "malformed date/time: '" + std::string(text) + "'");
    }
}

} // namespace

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    if (text.size() != 20) {
        throw Error("ParseError", "malformed timestamp: '" + std::string(text) + "'");
    }
    const auto ymd = parse_date(text.substr(0, 10));
    expect_char(text, 10, 'T');
    expect_char(text, 13, ':');
    expect_char(text, 16, ':');
    expect_char(text, 19, 'Z');
    const int h = read_digits(text, 11, 2);
    const int m = read_digits(text, 14, 2);
    const int s = read_digits(text, 17, 2);
    if (h > 23 || m > 59 || s > 59) {
        throw Error("ParseError", "time of day out of range: '" + std::string(text) + "'");
    }
    return sys_days{ymd} + hours{h} + minutes{m} + seconds{s};
}

std::string format_date(std::chrono::year_month_day d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

std::chrono::year_month_day parse_date(std::string_view text) {
    using namespace std::chrono;
    if (text.size() != 10) {
        throw Error("ParseError", "malformed date: '" + std::string(text) + "'");
    }
    expect_char(text, 4, '-');
    expect_char(text, 7, '-');
    const year_month_day ymd{year{read_digits(text, 0, 4)},
                             month{static_cast<unsigned>(read_digits(text, 5, 2))},
                             day{static_cast<unsigned>(read_digits(text, 8, 2))}};
    if (!ymd.ok()) {
        throw Error("ParseError", "invalid calendar date: '" + std::string(text) + "'");
    }
    return ymd;
}

Timestamp now_utc() {
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

} // namespace riskflow
