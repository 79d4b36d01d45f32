#include "intentlab/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "intentlab/error.hpp"

namespace intentlab {

namespace {

template <typename PerInstance>
double average_over_users(std::span<const UserInstances> users, std::size_t n, PerInstance per_instance) {
    if (n < 1) throw RangeError("N must be >= 1");
    double total = 0.0;
    std::size_t counted = 0;
    for (const auto& user : users) {
        if (user.truths.size() != user.recommendations.size()) {
            throw ValidationError("recommendation and ground-truth counts differ");
        }
        if (user.truths.empty()) continue;
        double sum = 0.0;
        for (std::size_t i = 0; i < user.truths.size(); ++i) {
            const auto& recs = user.recommendations[i];
            const auto end = recs.begin() + static_cast<std::ptrdiff_t>(std::min(n, recs.size()));
            const bool hit = std::find(recs.begin(), end, user.truths[i]) != end;
            sum += per_instance(hit);
        }
        total += sum / static_cast<double>(user.truths.size());
        ++counted;
    }
    return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

}  // namespace

double precision_at_n(std::span<const UserInstances> users, std::size_t n) {
    // |R* | is 1 per instance, so the ratio is 1 on a hit and 0 otherwise.
    return average_over_users(users, n, [](bool hit) { return hit ? 1.0 : 0.0; });
}

double conventional_precision_at_n(std::span<const UserInstances> users, std::size_t n) {
    return average_over_users(users, n, [n](bool hit) { return hit ? 1.0 / static_cast<double>(n) : 0.0; });
}

UserReplay replay_user(std::span<const ContextEvent> events, const EngineConfig& config) {
    UserReplay out{.engine = Engine(config)};
    if (!events.empty()) out.user_id = events.front().user_id;
    Engine& engine = out.engine;
    const std::size_t top_n = config.predictor.top_n_output;

    std::int64_t first_day = 0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const ContextEvent& ev = events[i];
        if (i > 0 && ev.time < events[i - 1].time) {
            throw ValidationError("events for user '" + ev.user_id + "' are not time-ordered at " +
                                  format_local_time(ev.time));
        }
        const RawContext ctx = ev.context();
        ctx.validate();
        const std::int64_t abs_day = day_index(ev.time);
        if (i == 0) first_day = abs_day;
        const std::int64_t day = abs_day - first_day;
        if (out.days.empty() || out.days.back().day != day) out.days.push_back(DayRecord{.day = day});

        const auto started = std::chrono::steady_clock::now();
        const PredictionResult prediction = engine.predict(ctx);
        const auto finished = std::chrono::steady_clock::now();
        out.total_predict_micros += std::chrono::duration<double, std::micro>(finished - started).count();

        const IntentId truth = engine.registry().intern(ev.intent);
        const bool hit = prediction.top() == truth;
        DayRecord& rec = out.days.back();
        ++rec.instances;
        if (hit) ++rec.hits;
        out.instances_detail.recommendations.push_back(prediction.top_intents(top_n));
        out.instances_detail.truths.push_back(truth);

        engine.observe(truth, ctx);
        rec.live_nodes = engine.store().size();
    }
    for (auto& rec : out.days) {
        rec.ratio = static_cast<double>(rec.hits) / static_cast<double>(rec.instances);
        out.instances += rec.instances;
        out.hits += rec.hits;
    }
    out.overall_hit_ratio = out.instances == 0 ? 0.0 : static_cast<double>(out.hits) / static_cast<double>(out.instances);
    return out;
}

ReplayReport replay(std::span<const ContextEvent> events, const EngineConfig& config, const ReplayOptions& options) {
    config.validate();
    std::map<std::string, std::vector<ContextEvent>> by_user;
    for (const auto& ev : events) by_user[ev.user_id].push_back(ev);

    std::vector<const std::vector<ContextEvent>*> streams;
    for (const auto& [user, stream] : by_user) streams.push_back(&stream);

    std::vector<std::optional<UserReplay>> results(streams.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < streams.size(); i = next++) {
            try {
                results[i] = replay_user(*streams[i], config);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, std::max<std::size_t>(1, streams.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    ReplayReport report;
    std::map<std::int64_t, DayRecord> days;
    std::map<std::int64_t, double> ratio_sums;
    std::map<std::int64_t, std::size_t> ratio_counts;
    std::vector<UserInstances> per_user;
    double total_micros = 0.0;
    double ratio_total = 0.0;
    for (auto& slot : results) {
        UserReplay& user = *slot;
        for (const auto& rec : user.days) {
            DayRecord& agg = days[rec.day];
            agg.day = rec.day;
            agg.instances += rec.instances;
            agg.hits += rec.hits;
            agg.live_nodes += rec.live_nodes;
            ratio_sums[rec.day] += rec.ratio;
            ++ratio_counts[rec.day];
        }
        report.instances += user.instances;
        report.hits += user.hits;
        total_micros += user.total_predict_micros;
        if (user.instances > 0) ratio_total += user.overall_hit_ratio;
        per_user.push_back(user.instances_detail);
    }
    for (auto& [day, rec] : days) {
        rec.ratio = ratio_sums[day] / static_cast<double>(ratio_counts[day]);
        report.per_day.push_back(rec);
    }
    const auto active_users = static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [](const auto& u) { return u->instances > 0; }));
    report.overall_hit_ratio = active_users == 0 ? 0.0 : ratio_total / static_cast<double>(active_users);
    report.avg_predict_micros = report.instances == 0 ? 0.0 : total_micros / static_cast<double>(report.instances);
    for (const std::size_t n : options.precision_ns) {
        report.precision_at[n] = precision_at_n(per_user, n);
        report.conventional_precision_at[n] = conventional_precision_at_n(per_user, n);
    }
    if (options.keep_engines) {
        for (auto& slot : results) report.users.push_back(std::move(*slot));
    }
    return report;
}

std::vector<SweepPoint> sweep(std::span<const ContextEvent> events, const EngineConfig& base,
                              SweepParameter parameter, std::span<const double> values,
                              const ReplayOptions& options) {
    if (values.empty()) throw ValidationError("sweep needs at least one value");
    ReplayOptions opts = options;
    opts.keep_engines = false;
    std::vector<SweepPoint> out;
    for (const double v : values) {
        EngineConfig cfg = base;
        if (parameter == SweepParameter::DecayK) {
            cfg.store.decay_k = v;
        } else {
            cfg.predictor.score_cutoff = v;
        }
        out.push_back({v, replay(events, cfg, opts).overall_hit_ratio});
    }
    return out;
}

SweepParameter parse_sweep_parameter(const std::string& name) {
    if (name == "decay_k") return SweepParameter::DecayK;
    if (name == "cutoff_c") return SweepParameter::CutoffC;
    throw ValidationError("unknown sweep parameter '" + name + "' (expected decay_k or cutoff_c)");
}

const char* sweep_parameter_name(SweepParameter parameter) {
    return parameter == SweepParameter::DecayK ? "decay_k" : "cutoff_c";
}

}  // namespace intentlab
