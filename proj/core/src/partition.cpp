#include "potalign/partition.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include <fftw3.h>

namespace potalign::partition {

namespace {

// FFTW plan creation is not thread-safe; plans and their buffers are cached
// per thread and created under a global lock.
std::mutex g_fftw_mutex;

struct PlanSlot {
    fftw_plan plan = nullptr;
    double* in = nullptr;
    fftw_complex* out = nullptr;
    int n = 0;

    ~PlanSlot() {
        if (plan) {
            std::lock_guard<std::mutex> lock(g_fftw_mutex);
            fftw_destroy_plan(plan);
            fftw_free(in);
            fftw_free(out);
        }
    }
};

PlanSlot& plan_for_length(int n) {
    thread_local std::map<int, PlanSlot> cache;
    PlanSlot& slot = cache[n];
    if (!slot.plan) {
        std::lock_guard<std::mutex> lock(g_fftw_mutex);
        slot.n = n;
        slot.in = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<size_t>(n)));
        slot.out = static_cast<fftw_complex*>(
            fftw_malloc(sizeof(fftw_complex) * (static_cast<size_t>(n) / 2 + 1)));
        slot.plan = fftw_plan_dft_r2c_1d(n, slot.in, slot.out, FFTW_ESTIMATE);
    }
    return slot;
}

// period/frequency induced by bin k of a W-frame window; empty if the pair
// violates the constraints.
std::optional<std::pair<int, int>> bin_period_frequency(int k, int window,
                                                        const PeriodicityParams& p) {
    if (k < 1) return std::nullopt;
    const int period = static_cast<int>(std::lround(static_cast<double>(window) / k));
    if (period < p.min_period) return std::nullopt;
    const int frequency = window / period;
    if (frequency < p.min_frequency) return std::nullopt;
    return std::make_pair(period, frequency);
}

struct WindowPeak {
    int start = 0;   // relative to the searched segment
    int length = 0;
    double height = 0.0;
    int period = 0;
    int frequency = 0;
};

std::optional<WindowPeak> best_window(std::span<const SparseCounts> counts, int seg_start,
                                      int seg_len, const PeriodicityParams& p) {
    std::optional<WindowPeak> best;
    for (int start = seg_start; start + p.min_window <= seg_start + seg_len;
         start += p.start_stride) {
        for (int w = p.min_window; start + w <= seg_start + seg_len; w += p.window_stride) {
            const auto spec = periodicity_spectrum(counts.subspan(start, w), p.min_window);
            if (!spec) continue;
            WindowPeak peak{start, w, 0.0, 0, 0};
            for (int k = 1; k < static_cast<int>(spec->energy.size()); ++k) {
                const auto pf = bin_period_frequency(k, w, p);
                if (!pf) continue;
                if (spec->energy[k] > peak.height) {
                    peak.height = spec->energy[k];
                    peak.period = pf->first;
                    peak.frequency = pf->second;
                }
            }
            if (peak.period == 0) continue;
            // ties prefer the longer window, then the earlier start
            if (!best || peak.height > best->height ||
                (peak.height == best->height && peak.length > best->length) ||
                (peak.height == best->height && peak.length == best->length &&
                 peak.start < best->start))
                best = peak;
        }
    }
    return best;
}

void search_segment(std::span<const SparseCounts> counts, int base_frame, int seg_start,
                    int seg_len, const PeriodicityParams& p,
                    std::vector<PeriodicDetection>& out) {
    if (seg_len < p.min_window) return;
    const auto peak = best_window(counts, seg_start, seg_len, p);
    if (!peak || peak->height < p.theta_h) return;
    out.push_back({base_frame + peak->start, base_frame + peak->start + peak->length - 1,
                   peak->height, peak->period, peak->frequency});
    search_segment(counts, base_frame, seg_start, peak->start - seg_start, p, out);
    const int right_start = peak->start + peak->length;
    search_segment(counts, base_frame, right_start, seg_start + seg_len - right_start, p, out);
}

}  // namespace

std::vector<PauseRun> detect_pauses(const pot::ArticulationScore& articulation, double theta_f,
                                    int min_len) {
    std::vector<PauseRun> runs;
    const int n = static_cast<int>(articulation.sigma.size());
    int run_start = -1;
    for (int i = 0; i <= n; ++i) {
        const bool still =
            i < n && articulation.sigma[i] && *articulation.sigma[i] < theta_f;
        if (still && run_start < 0) run_start = i;
        if (!still && run_start >= 0) {
            if (i - run_start >= min_len) runs.push_back({run_start, i - 1});
            run_start = -1;
        }
    }
    return runs;
}

std::optional<Spectrum> periodicity_spectrum(std::span<const SparseCounts> window_counts,
                                             int min_window) {
    const int w = static_cast<int>(window_counts.size());
    if (w < min_window) return std::nullopt;

    std::set<int> active;
    for (const SparseCounts& frame : window_counts)
        for (const auto& [codeword, count] : frame) {
            (void)count;
            active.insert(codeword);
        }

    Spectrum spec;
    spec.energy.assign(static_cast<size_t>(w) / 2 + 1, 0.0);
    if (active.empty()) return spec;

    PlanSlot& slot = plan_for_length(w);
    std::vector<double> series(static_cast<size_t>(w));
    for (int codeword : active) {
        std::fill(series.begin(), series.end(), 0.0);
        for (int t = 0; t < w; ++t) {
            const SparseCounts& frame = window_counts[t];
            const auto it = std::lower_bound(
                frame.begin(), frame.end(), codeword,
                [](const std::pair<int, double>& a, int b) { return a.first < b; });
            if (it != frame.end() && it->first == codeword) series[t] = it->second;
        }
        std::copy(series.begin(), series.end(), slot.in);
        fftw_execute(slot.plan);
        for (int k = 1; k <= w / 2; ++k)
            spec.energy[k] += std::hypot(slot.out[k][0], slot.out[k][1]);
    }

    double total = 0.0;
    for (int k = 1; k <= w / 2; ++k) total += spec.energy[k];
    if (total > 0.0)
        for (double& e : spec.energy) e /= total;
    else
        std::fill(spec.energy.begin(), spec.energy.end(), 0.0);
    spec.energy[0] = 0.0;
    return spec;
}

std::vector<PeriodicDetection> detect_periodic_subintervals(
    std::span<const SparseCounts> frame_counts, int base_frame, const PeriodicityParams& params) {
    std::vector<PeriodicDetection> out;
    search_segment(frame_counts, base_frame, 0, static_cast<int>(frame_counts.size()), params,
                   out);
    std::sort(out.begin(), out.end(), [](const PeriodicDetection& a, const PeriodicDetection& b) {
        return a.start_frame < b.start_frame;
    });
    return out;
}

std::vector<Interval> partition_shot(const Shot& shot, const std::vector<PauseRun>& pauses,
                                     const std::vector<PeriodicDetection>& periodic) {
    const int n = shot.num_frames();
    std::vector<bool> is_pause(static_cast<size_t>(n), false);
    for (const PauseRun& run : pauses)
        for (int f = std::max(0, run.start_frame); f <= std::min(n - 1, run.end_frame); ++f)
            is_pause[f] = true;

    std::vector<int> cut_starts;  // frames where a periodic window begins or the frame after one
    for (const PeriodicDetection& d : periodic) {
        cut_starts.push_back(d.start_frame);
        cut_starts.push_back(d.end_frame + 1);
    }
    std::sort(cut_starts.begin(), cut_starts.end());

    const bool pause_split = !pauses.empty();
    std::vector<Interval> out;
    int seg_start = -1;
    auto flush_segment = [&](int seg_end) {
        if (seg_start < 0) return;
        // split the pause-free segment at periodic boundaries
        std::vector<int> starts = {seg_start};
        for (int c : cut_starts)
            if (c > seg_start && c <= seg_end) starts.push_back(c);
        starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
        for (std::size_t i = 0; i < starts.size(); ++i) {
            const int a = starts[i];
            const int b = (i + 1 < starts.size()) ? starts[i + 1] - 1 : seg_end;
            IntervalSource src = IntervalSource::whole_shot;
            if (starts.size() > 1)
                src = IntervalSource::periodic_split;
            else if (pause_split)
                src = IntervalSource::pause_split;
            out.push_back({shot.shot_id, a, b, src});
        }
        seg_start = -1;
    };

    for (int f = 0; f < n; ++f) {
        if (is_pause[f]) {
            flush_segment(f - 1);
        } else if (seg_start < 0) {
            seg_start = f;
        }
    }
    flush_segment(n - 1);

    // merge sub-2-frame fragments into a temporally contiguous neighbour;
    // a fragment isolated between pauses is treated as part of the pause
    std::vector<Interval> merged;
    Interval pending;
    bool has_pending = false;
    for (Interval iv : out) {
        if (has_pending) {
            if (pending.end_frame + 1 == iv.start_frame) iv.start_frame = pending.start_frame;
            has_pending = false;
        }
        if (iv.length() >= 2) {
            merged.push_back(iv);
        } else if (!merged.empty() && merged.back().end_frame + 1 == iv.start_frame) {
            merged.back().end_frame = iv.end_frame;
        } else {
            pending = iv;
            has_pending = true;
        }
    }
    return merged;
}

}  // namespace potalign::partition
