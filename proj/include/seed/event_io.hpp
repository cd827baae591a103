#pragma once

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "seed/events.hpp"

namespace seed {

// Binary event container: 16-byte header (magic "EVT0", width u16, height u16,
// record count u64), then 9-byte little-endian records (t u32, x u16, y u16,
// polarity u8 with 1 = positive).
namespace detail {

template <typename U>
void put_le(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

template <typename U>
U get_le(const unsigned char* p) {
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
    return v;
}

}  // namespace detail

inline void write_events_binary(const EventStream& stream, const std::string& path) {
    std::string buf;
    buf.reserve(16 + 9 * stream.events.size());
    buf += "EVT0";
    detail::put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.width));
    detail::put_le<std::uint16_t>(buf, static_cast<std::uint16_t>(stream.height));
    detail::put_le<std::uint64_t>(buf, stream.events.size());
    for (const Event& e : stream.events) {
        detail::put_le<std::uint32_t>(buf, e.t_us);
        detail::put_le<std::uint16_t>(buf, e.x);
        detail::put_le<std::uint16_t>(buf, e.y);
        buf.push_back(e.polarity > 0 ? 1 : 0);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_events: cannot open " + path);
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline EventStream read_events_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_events: cannot open " + path);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());

    if (buf.size() < 16 || std::memcmp(p, "EVT0", 4) != 0)
        throw std::runtime_error("read_events: bad header in " + path);
    EventStream stream;
    stream.width = detail::get_le<std::uint16_t>(p + 4);
    stream.height = detail::get_le<std::uint16_t>(p + 6);
    std::uint64_t count = detail::get_le<std::uint64_t>(p + 8);

    if (buf.size() != 16 + 9 * count)
        throw std::runtime_error("read_events: truncated record at byte offset " +
                                 std::to_string(buf.size()) + " (expected " +
                                 std::to_string(16 + 9 * count) + " bytes)");
    stream.events.reserve(count);
    std::uint32_t prev_t = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const unsigned char* r = p + 16 + 9 * i;
        Event e;
        e.t_us = detail::get_le<std::uint32_t>(r);
        e.x = detail::get_le<std::uint16_t>(r + 4);
        e.y = detail::get_le<std::uint16_t>(r + 6);
        e.polarity = r[8] ? 1 : -1;
        if (e.t_us < prev_t)
            throw std::runtime_error("read_events: non-monotone timestamp at record " +
                                     std::to_string(i));
        prev_t = e.t_us;
        stream.events.push_back(e);
    }
    return stream;
}

// CSV alternative with header "t_us,x,y,p"; p is 1 for positive, 0 for negative.
inline void write_events_csv(const EventStream& stream, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_events: cannot open " + path);
    f << "t_us,x,y,p\n";
    for (const Event& e : stream.events)
        f << e.t_us << ',' << e.x << ',' << e.y << ',' << (e.polarity > 0 ? 1 : 0) << '\n';
}

inline EventStream read_events_csv(const std::string& path, int width, int height) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_events: cannot open " + path);
    EventStream stream;
    stream.width = width;
    stream.height = height;
    std::string line;
    if (!std::getline(f, line) || line.rfind("t_us", 0) != 0)
        throw std::runtime_error("read_events: missing CSV header in " + path);
    std::size_t rec = 0;
    std::uint32_t prev_t = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        unsigned long t, x, y, pol;
        if (std::sscanf(line.c_str(), "%lu,%lu,%lu,%lu", &t, &x, &y, &pol) != 4)
            throw std::runtime_error("read_events: malformed CSV record " + std::to_string(rec));
        Event e;
        e.t_us = static_cast<std::uint32_t>(t);
        e.x = static_cast<std::uint16_t>(x);
        e.y = static_cast<std::uint16_t>(y);
        e.polarity = pol ? 1 : -1;
        if (e.t_us < prev_t)
            throw std::runtime_error("read_events: non-monotone timestamp at record " +
                                     std::to_string(rec));
        prev_t = e.t_us;
        stream.events.push_back(e);
        ++rec;
    }
    return stream;
}

inline nlohmann::json ground_truth_to_json(const GroundTruth& gt) {
    nlohmann::json frames = nlohmann::json::array();
    for (const auto& frame : gt.frames) {
        nlohmann::json boxes = nlohmann::json::array();
        for (const GtBox& g : frame)
            boxes.push_back({{"bbox", {g.box.x, g.box.y, g.box.w, g.box.h}}, {"class", g.class_id}});
        frames.push_back(std::move(boxes));
    }
    return nlohmann::json{{"frames", std::move(frames)}};
}

inline GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    GroundTruth gt;
    for (const auto& frame : j.at("frames")) {
        std::vector<GtBox> boxes;
        for (const auto& b : frame) {
            const auto& bb = b.at("bbox");
            boxes.push_back({{bb.at(0).get<double>(), bb.at(1).get<double>(), bb.at(2).get<double>(),
                              bb.at(3).get<double>()},
                             b.at("class").get<int>()});
        }
        gt.frames.push_back(std::move(boxes));
    }
    return gt;
}

inline void write_ground_truth(const GroundTruth& gt, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_ground_truth: cannot open " + path);
    f << ground_truth_to_json(gt).dump(2) << '\n';
}

inline GroundTruth read_ground_truth(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_ground_truth: cannot open " + path);
    nlohmann::json j;
    f >> j;
    return ground_truth_from_json(j);
}

}  // namespace seed
