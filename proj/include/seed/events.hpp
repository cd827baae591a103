#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "seed/tensor.hpp"

namespace seed {

// One DVS event. Timestamps are integer microseconds.
struct Event {
    std::uint32_t t_us = 0;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::int8_t polarity = 1;  // +1 or -1
};

struct EventStream {
    int width = 0;
    int height = 0;
    std::vector<Event> events;  // non-decreasing in t_us
};

// Binned event-count frame: channels = 2 * micro_bins, positive polarity
// first within each micro bin.
struct EventFrameTensor {
    Tensor3<float> values;
    int frame_index = 0;
    int duration_ms = 0;
    int micro_bins = 1;
};

inline int event_channel(int micro_bin, int polarity) {
    return 2 * micro_bin + (polarity > 0 ? 0 : 1);
}

// Splits a sorted stream into frame tensors of duration frame_ms, with time
// binned into the channel dimension. Frame k covers [k*frame_ms, (k+1)*frame_ms).
inline std::vector<EventFrameTensor> bin_events(const EventStream& stream, int frame_ms,
                                                int micro_bins) {
    if (frame_ms <= 0) throw std::invalid_argument("bin_events: frame_ms must be positive");
    if (micro_bins < 1) throw std::invalid_argument("bin_events: micro_bins must be >= 1");

    std::vector<EventFrameTensor> frames;
    if (stream.events.empty()) return frames;

    const std::uint64_t frame_us = static_cast<std::uint64_t>(frame_ms) * 1000;
    std::uint32_t prev_t = 0;
    for (std::size_t i = 0; i < stream.events.size(); ++i) {
        const Event& e = stream.events[i];
        if (e.t_us < prev_t)
            throw std::invalid_argument("bin_events: unsorted stream at record " +
                                        std::to_string(i));
        prev_t = e.t_us;
        if (e.x >= stream.width || e.y >= stream.height)
            throw std::invalid_argument("bin_events: event outside sensor at record " +
                                        std::to_string(i));

        std::size_t k = e.t_us / frame_us;
        while (frames.size() <= k) {
            EventFrameTensor f;
            f.values = Tensor3<float>(2 * micro_bins, stream.height, stream.width, 0.0f);
            f.frame_index = static_cast<int>(frames.size());
            f.duration_ms = frame_ms;
            f.micro_bins = micro_bins;
            frames.push_back(std::move(f));
        }
        std::uint64_t offset = e.t_us - k * frame_us;
        int b = static_cast<int>(offset * micro_bins / frame_us);
        if (b >= micro_bins) b = micro_bins - 1;
        frames[k].values.at(event_channel(b, e.polarity), e.y, e.x) += 1.0f;
    }
    return frames;
}

// Axis-aligned box, top-left origin, x = column.
struct Box {
    double x = 0, y = 0, w = 0, h = 0;
};

struct GtBox {
    Box box;
    int class_id = 0;
};

// Per-frame ground truth for one sequence.
struct GroundTruth {
    std::vector<std::vector<GtBox>> frames;
};

inline double box_diagonal(const Box& b) { return std::sqrt(b.w * b.w + b.h * b.h); }

// Keeps a box iff diagonal >= min_diag and min side >= min_side.
inline GroundTruth filter_boxes(const GroundTruth& gt, double min_diag, double min_side) {
    if (min_diag < 0 || min_side < 0)
        throw std::invalid_argument("filter_boxes: thresholds must be >= 0");
    GroundTruth out;
    out.frames.resize(gt.frames.size());
    for (std::size_t f = 0; f < gt.frames.size(); ++f)
        for (const GtBox& g : gt.frames[f])
            if (box_diagonal(g.box) >= min_diag && std::min(g.box.w, g.box.h) >= min_side)
                out.frames[f].push_back(g);
    return out;
}

}  // namespace seed
