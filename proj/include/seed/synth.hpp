#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "seed/events.hpp"

namespace seed {

enum class ObjectShape { Rectangle, Disk };

// Piecewise-constant velocity, in pixels per frame.
struct VelocityPhase {
    int frames = 0;
    double vx = 0;
    double vy = 0;
};

struct SceneObject {
    ObjectShape shape = ObjectShape::Rectangle;
    double size_w = 0;  // rectangle: full width; disk: diameter
    double size_h = 0;
    int class_id = 0;
    double intensity = 0.9;  // linear intensity painted over the background
    double start_x = 0;      // center at t = 0
    double start_y = 0;
    std::vector<VelocityPhase> velocity;
};

struct SceneSpec {
    int width = 0;
    int height = 0;
    int frames = 0;
    int frame_ms = 50;
    int substeps = 4;          // temporal sub-sampling per frame
    double contrast = 0.15;    // log-intensity threshold
    double background = 0.4;
    double threshold_jitter = 0.0;  // relative per-pixel spread of the contrast threshold
    double noise_rate = 0.0;        // spurious events per frame over the whole array
    std::uint64_t seed = 0;
    std::vector<SceneObject> objects;
};

namespace detail {

inline void validate_scene(const SceneSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0)
        throw std::invalid_argument("scene: sensor size must be positive");
    if (spec.frames <= 0) throw std::invalid_argument("scene: frames must be positive");
    if (spec.frame_ms <= 0) throw std::invalid_argument("scene: frame_ms must be positive");
    if (spec.substeps < 1) throw std::invalid_argument("scene: substeps must be >= 1");
    if (spec.contrast <= 0) throw std::invalid_argument("scene: contrast must be positive");
    if (spec.background <= 0) throw std::invalid_argument("scene: background must be positive");
    double margin = std::max(spec.width, spec.height);
    for (std::size_t i = 0; i < spec.objects.size(); ++i) {
        const SceneObject& o = spec.objects[i];
        std::string tag = "objects[" + std::to_string(i) + "]";
        if (o.size_w <= 0 || o.size_h <= 0)
            throw std::invalid_argument("scene: " + tag + ".size must be positive");
        if (o.intensity <= 0) throw std::invalid_argument("scene: " + tag + ".intensity must be positive");
        int covered = 0;
        for (const VelocityPhase& p : o.velocity) covered += p.frames;
        if (covered < spec.frames)
            throw std::invalid_argument("scene: " + tag +
                                        ".velocity schedule does not cover the sequence");
        // Walk the trajectory; the object must stay within one sensor size of the array.
        double cx = o.start_x, cy = o.start_y;
        int frame = 0;
        for (const VelocityPhase& p : o.velocity) {
            for (int f = 0; f < p.frames && frame < spec.frames; ++f, ++frame) {
                cx += p.vx;
                cy += p.vy;
                if (cx < -margin || cx > spec.width + margin || cy < -margin ||
                    cy > spec.height + margin)
                    throw std::invalid_argument("scene: " + tag + ".velocity drives object out of bounds");
            }
        }
    }
}

// Object center at continuous frame time f (fractional frames).
inline void object_center(const SceneObject& o, double f, double* cx, double* cy) {
    double x = o.start_x, y = o.start_y, done = 0;
    for (const VelocityPhase& p : o.velocity) {
        double span = std::min(static_cast<double>(p.frames), f - done);
        if (span <= 0) break;
        x += p.vx * span;
        y += p.vy * span;
        done += p.frames;
        if (done >= f) break;
    }
    *cx = x;
    *cy = y;
}

inline bool inside_object(const SceneObject& o, double cx, double cy, int px, int py) {
    double dx = px + 0.5 - cx;
    double dy = py + 0.5 - cy;
    if (o.shape == ObjectShape::Rectangle)
        return std::abs(dx) <= o.size_w / 2 && std::abs(dy) <= o.size_h / 2;
    double rx = dx / (o.size_w / 2), ry = dy / (o.size_h / 2);
    return rx * rx + ry * ry <= 1.0;
}

// Linear intensity at a pixel; later objects paint over earlier ones.
inline double render_pixel(const SceneSpec& spec, double frame_time, int px, int py) {
    double v = spec.background;
    for (const SceneObject& o : spec.objects) {
        double cx, cy;
        object_center(o, frame_time, &cx, &cy);
        if (inside_object(o, cx, cy, px, py)) v = o.intensity;
    }
    return v;
}

}  // namespace detail

// Renders the scene at substep resolution and emits events from a per-pixel
// latched log-intensity reference (classic DVS model). Deterministic per seed.
inline std::pair<EventStream, GroundTruth> synth_scene(const SceneSpec& spec) {
    detail::validate_scene(spec);

    EventStream stream;
    stream.width = spec.width;
    stream.height = spec.height;
    GroundTruth gt;
    gt.frames.resize(spec.frames);

    std::mt19937_64 rng(spec.seed);
    const std::size_t npix = static_cast<std::size_t>(spec.width) * spec.height;

    std::vector<double> threshold(npix, spec.contrast);
    if (spec.threshold_jitter > 0) {
        std::uniform_real_distribution<double> jitter(-spec.threshold_jitter, spec.threshold_jitter);
        for (double& t : threshold) t = spec.contrast * (1.0 + jitter(rng));
    }

    std::vector<double> reference(npix);
    for (int py = 0; py < spec.height; ++py)
        for (int px = 0; px < spec.width; ++px)
            reference[py * spec.width + px] = std::log(detail::render_pixel(spec, 0.0, px, py));

    const double frame_us = spec.frame_ms * 1000.0;
    for (int f = 0; f < spec.frames; ++f) {
        for (int s = 1; s <= spec.substeps; ++s) {
            double ft = f + static_cast<double>(s) / spec.substeps;
            auto t_us = static_cast<std::uint32_t>(ft * frame_us) - 1;  // stay inside frame f
            for (int py = 0; py < spec.height; ++py)
                for (int px = 0; px < spec.width; ++px) {
                    std::size_t i = static_cast<std::size_t>(py) * spec.width + px;
                    double logv = std::log(detail::render_pixel(spec, ft, px, py));
                    double delta = logv - reference[i];
                    int burst = 0;
                    while (std::abs(delta) >= threshold[i] && burst < 16) {
                        std::int8_t pol = delta > 0 ? 1 : -1;
                        stream.events.push_back({t_us, static_cast<std::uint16_t>(px),
                                                 static_cast<std::uint16_t>(py), pol});
                        reference[i] += pol * threshold[i];
                        delta = logv - reference[i];
                        ++burst;
                    }
                }
            if (spec.noise_rate > 0) {
                std::poisson_distribution<int> count(spec.noise_rate / spec.substeps);
                std::uniform_int_distribution<int> ux(0, spec.width - 1), uy(0, spec.height - 1);
                std::bernoulli_distribution up(0.5);
                int n = count(rng);
                for (int k = 0; k < n; ++k)
                    stream.events.push_back({t_us, static_cast<std::uint16_t>(ux(rng)),
                                             static_cast<std::uint16_t>(uy(rng)),
                                             static_cast<std::int8_t>(up(rng) ? 1 : -1)});
            }
        }
        // Ground truth at frame end, clipped to the sensor.
        for (const SceneObject& o : spec.objects) {
            double cx, cy;
            detail::object_center(o, f + 1.0, &cx, &cy);
            double x0 = std::max(0.0, cx - o.size_w / 2);
            double y0 = std::max(0.0, cy - o.size_h / 2);
            double x1 = std::min(static_cast<double>(spec.width), cx + o.size_w / 2);
            double y1 = std::min(static_cast<double>(spec.height), cy + o.size_h / 2);
            if (x1 > x0 && y1 > y0) gt.frames[f].push_back({{x0, y0, x1 - x0, y1 - y0}, o.class_id});
        }
    }

    // Noise events are appended out of order; restore the time ordering.
    std::stable_sort(stream.events.begin(), stream.events.end(),
                     [](const Event& a, const Event& b) { return a.t_us < b.t_us; });
    return {std::move(stream), std::move(gt)};
}

}  // namespace seed
