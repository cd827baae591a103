#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace seed {

// Dense 3-D activation grid, [channels][height][width], row-major.
template <typename T>
struct Tensor3 {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<T> data;

    Tensor3() = default;
    Tensor3(int c, int h, int w, T fill = T(0))
        : channels(c), height(h), width(w),
          data(static_cast<std::size_t>(c) * h * w, fill) {}

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor3& o) const {
        return channels == o.channels && height == o.height && width == o.width;
    }

    T& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    T at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    T* row(int c, int y) { return data.data() + (static_cast<std::size_t>(c) * height + y) * width; }
    const T* row(int c, int y) const {
        return data.data() + (static_cast<std::size_t>(c) * height + y) * width;
    }

    void fill(T v) { std::fill(data.begin(), data.end(), v); }
};

template <typename T>
struct SparseEntry {
    int c = 0;
    int y = 0;
    int x = 0;
    T value = T(0);
};

// Sparse activation map. Entries carry graded values and are kept sorted
// lexicographically by (y, x, c); stored values are nonzero.
template <typename T>
struct SparseMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<SparseEntry<T>> entries;

    SparseMap() = default;
    SparseMap(int c, int h, int w) : channels(c), height(h), width(w) {}

    bool empty() const { return entries.empty(); }
    double density() const {
        std::size_t total = static_cast<std::size_t>(channels) * height * width;
        return total == 0 ? 0.0 : static_cast<double>(entries.size()) / static_cast<double>(total);
    }
};

// Keeps strictly positive values; scan order (y, x, c) yields sorted entries.
template <typename T>
SparseMap<T> relu_sparsify(const Tensor3<T>& pre_act) {
    SparseMap<T> out(pre_act.channels, pre_act.height, pre_act.width);
    for (int y = 0; y < pre_act.height; ++y)
        for (int x = 0; x < pre_act.width; ++x)
            for (int c = 0; c < pre_act.channels; ++c) {
                T v = pre_act.at(c, y, x);
                if (v > T(0)) out.entries.push_back({c, y, x, v});
            }
    return out;
}

// Keeps all nonzero values regardless of sign.
template <typename T>
SparseMap<T> sparsify_nonzero(const Tensor3<T>& t) {
    SparseMap<T> out(t.channels, t.height, t.width);
    for (int y = 0; y < t.height; ++y)
        for (int x = 0; x < t.width; ++x)
            for (int c = 0; c < t.channels; ++c) {
                T v = t.at(c, y, x);
                if (v != T(0)) out.entries.push_back({c, y, x, v});
            }
    return out;
}

template <typename T>
Tensor3<T> densify(const SparseMap<T>& m) {
    Tensor3<T> out(m.channels, m.height, m.width, T(0));
    for (const auto& e : m.entries) out.at(e.c, e.y, e.x) = e.value;
    return out;
}

template <typename T>
bool has_nan(const Tensor3<T>& t) {
    for (T v : t.data)
        if (std::isnan(static_cast<double>(v))) return true;
    return false;
}

template <typename T>
T max_abs_diff(const Tensor3<T>& a, const Tensor3<T>& b) {
    assert(a.same_shape(b));
    T m = T(0);
    for (std::size_t i = 0; i < a.data.size(); ++i)
        m = std::max(m, std::abs(a.data[i] - b.data[i]));
    return m;
}

// max |a-b| / max(1, |a|, |b|), the relative error used by the numeric tests
template <typename T>
double max_rel_diff(const Tensor3<T>& a, const Tensor3<T>& b) {
    assert(a.same_shape(b));
    double m = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        double da = a.data[i], db = b.data[i];
        double scale = std::max({1.0, std::abs(da), std::abs(db)});
        m = std::max(m, std::abs(da - db) / scale);
    }
    return m;
}

}  // namespace seed
