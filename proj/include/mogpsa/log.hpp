#pragma once

#include <functional>
#include <iostream>
#include <mutex>
#include <string>

namespace mogpsa {

using WarningSink = std::function<void(const std::string&)>;

namespace detail {

struct WarningState {
    std::mutex mutex;
    WarningSink sink = [](const std::string& msg) { std::clog << "warning: " << msg << '\n'; };
};

inline WarningState& warning_state()
{
    static WarningState state;
    return state;
}

} // namespace detail

/// Replaces the process-wide warning sink and returns the previous one.
inline WarningSink set_warning_sink(WarningSink sink)
{
    auto& st = detail::warning_state();
    std::lock_guard lock(st.mutex);
    std::swap(st.sink, sink);
    return sink;
}

inline void warn(const std::string& msg)
{
    auto& st = detail::warning_state();
    std::lock_guard lock(st.mutex);
    if (st.sink) st.sink(msg);
}

} // namespace mogpsa
