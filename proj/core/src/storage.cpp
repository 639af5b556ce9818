#include "smapi/storage.hpp"

#include <algorithm>
#include <mutex>

#include "smapi/activity_json.hpp"
#include "smapi/errors.hpp"
#include "smapi/timestamp.hpp"

namespace smapi {

using nlohmann::json;

std::string_view to_string(JobKind k) {
    return k == JobKind::Search ? "search" : "crawl";
}

std::string_view to_string(JobState s) {
    switch (s) {
    case JobState::Pending:   return "pending";
    case JobState::Running:   return "running";
    case JobState::Completed: return "completed";
    case JobState::Failed:    return "failed";
    case JobState::Cancelled: return "cancelled";
    }
    return "unknown";
}

namespace {

JobKind job_kind_from(const std::string& s) {
    return s == "crawl" ? JobKind::Crawl : JobKind::Search;
}

JobState job_state_from(const std::string& s) {
    if (s == "pending") return JobState::Pending;
    if (s == "running") return JobState::Running;
    if (s == "completed") return JobState::Completed;
    if (s == "failed") return JobState::Failed;
    return JobState::Cancelled;
}

bool is_terminal(JobState s) {
    return s == JobState::Completed || s == JobState::Failed || s == JobState::Cancelled;
}

JobRecord job_from_json(const json& j) {
    JobRecord r;
    r.jobId = j.at("jobId").get<std::string>();
    r.kind = job_kind_from(j.at("kind").get<std::string>());
    r.state = job_state_from(j.at("state").get<std::string>());
    r.spec = j.value("spec", json::object());
    r.createdAt_ms = j.value("createdAtMs", static_cast<std::int64_t>(0));
    r.lastTickAt_ms = j.value("lastTickAtMs", static_cast<std::int64_t>(0));
    if (auto it = j.find("counters"); it != j.end()) {
        r.counters.gathered = it->value("gathered", 0ULL);
        r.counters.deduplicated = it->value("deduplicated", 0ULL);
        r.counters.skipped = it->value("skipped", 0ULL);
        if (auto units = it->find("requestUnitsUsed"); units != it->end()) {
            for (auto u = units->begin(); u != units->end(); ++u) {
                if (auto p = parse_platform(u.key())) {
                    r.counters.requestUnitsUsed[*p] = u.value().get<std::uint64_t>();
                }
            }
        }
    }
    if (auto it = j.find("diagnostics"); it != j.end() && it->is_array()) {
        for (const auto& d : *it) r.diagnostics.push_back(d.get<std::string>());
    }
    return r;
}

} // namespace

json job_to_json(const JobRecord& r, bool include_spec) {
    json counters;
    counters["gathered"] = r.counters.gathered;
    counters["deduplicated"] = r.counters.deduplicated;
    counters["skipped"] = r.counters.skipped;
    json units = json::object();
    for (const auto& [p, n] : r.counters.requestUnitsUsed) {
        units[std::string(to_string(p))] = n;
    }
    counters["requestUnitsUsed"] = units;

    json j;
    j["jobId"] = r.jobId;
    j["kind"] = std::string(to_string(r.kind));
    j["state"] = std::string(to_string(r.state));
    j["createdAt"] = Timestamp{r.createdAt_ms, 0}.to_iso8601();
    j["createdAtMs"] = r.createdAt_ms;
    if (r.lastTickAt_ms > 0) {
        j["lastTickAt"] = Timestamp{r.lastTickAt_ms, 0}.to_iso8601();
        j["lastTickAtMs"] = r.lastTickAt_ms;
    }
    j["counters"] = counters;
    if (include_spec) j["spec"] = r.spec;
    if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
    return j;
}

ActivityStore::ActivityStore(const Clock& clock, std::filesystem::path log_path)
    : clock_(clock), log_path_(std::move(log_path)) {
    if (!log_path_.empty()) {
        if (std::filesystem::exists(log_path_)) replay(log_path_);
        log_.open(log_path_, std::ios::app);
        if (!log_) throw StorageError("cannot open store log: " + log_path_.string());
    }
}

void ActivityStore::replay(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw StorageError("cannot read store log: " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json op = json::parse(line, nullptr, false);
        if (op.is_discarded()) {
            throw StorageError("corrupt store log at line " + std::to_string(line_no));
        }
        std::string kind = op.value("op", "");
        if (kind == "job") {
            JobRecord record = job_from_json(op.at("record"));
            auto& e = jobs_[record.jobId];
            auto members = std::move(e.members);
            e.record = std::move(record);
            e.members = std::move(members);
        } else if (kind == "act") {
            auto activity = std::make_shared<Activity>(activity_from_json(op.at("doc")));
            OrderKey key{activity->start_epoch_ms(), activity->canonical_id()};
            key_index_[activity->canonical_id()] = key;
            ordered_[key] = std::move(activity);
        } else if (kind == "link") {
            std::string job_id = op.at("job").get<std::string>();
            std::string act_key = op.at("key").get<std::string>();
            auto idx = key_index_.find(act_key);
            if (idx == key_index_.end()) continue;
            jobs_[job_id].members.insert(idx->second);
            key_jobs_[act_key].insert(job_id);
        } else if (kind == "drop-job") {
            std::string job_id = op.at("job").get<std::string>();
            auto it = jobs_.find(job_id);
            if (it == jobs_.end()) continue;
            for (const auto& member : it->second.members) {
                auto& owners = key_jobs_[member.second];
                owners.erase(job_id);
                if (owners.empty()) {
                    key_jobs_.erase(member.second);
                    key_index_.erase(member.second);
                    ordered_.erase(member);
                }
            }
            jobs_.erase(it);
        }
    }
}

void ActivityStore::log_line(const json& op) {
    if (log_.is_open()) log_ << op.dump() << '\n';
}

void ActivityStore::log_job(const JobRecord& record) {
    if (!log_.is_open()) return;
    json op;
    op["op"] = "job";
    op["record"] = job_to_json(record);
    log_line(op);
}

ActivityStore::JobEntry& ActivityStore::entry(const std::string& jobId) {
    auto it = jobs_.find(jobId);
    if (it == jobs_.end()) throw NotFoundError("unknown job: " + jobId);
    return it->second;
}

const ActivityStore::JobEntry& ActivityStore::entry(const std::string& jobId) const {
    auto it = jobs_.find(jobId);
    if (it == jobs_.end()) throw NotFoundError("unknown job: " + jobId);
    return it->second;
}

JobRecord ActivityStore::create_job(std::string jobId, JobKind kind, json spec,
                                    JobState initial) {
    std::unique_lock lock(mu_);
    if (jobs_.contains(jobId)) throw ConflictError("job already exists: " + jobId);
    JobRecord record;
    record.jobId = std::move(jobId);
    record.kind = kind;
    record.spec = std::move(spec);
    record.state = initial;
    record.createdAt_ms = clock_.now_ms();
    jobs_[record.jobId] = JobEntry{record, {}};
    log_job(record);
    log_.flush();
    return record;
}

JobRecord ActivityStore::job(const std::string& jobId) const {
    std::shared_lock lock(mu_);
    return entry(jobId).record;
}

std::vector<JobRecord> ActivityStore::list_jobs() const {
    std::shared_lock lock(mu_);
    std::vector<JobRecord> out;
    out.reserve(jobs_.size());
    for (const auto& [id, e] : jobs_) out.push_back(e.record);
    std::sort(out.begin(), out.end(), [](const JobRecord& a, const JobRecord& b) {
        if (a.createdAt_ms != b.createdAt_ms) return a.createdAt_ms > b.createdAt_ms;
        return a.jobId < b.jobId;
    });
    return out;
}

JobRecord ActivityStore::set_state(const std::string& jobId, JobState state) {
    std::unique_lock lock(mu_);
    auto& e = entry(jobId);
    JobState current = e.record.state;
    if (current == state) return e.record;
    bool allowed = false;
    if (current == JobState::Pending) {
        allowed = true; // may start or be terminated before starting
    } else if (current == JobState::Running) {
        allowed = is_terminal(state);
    }
    if (!allowed) {
        throw ConflictError("illegal job state transition " +
                            std::string(to_string(current)) + " -> " +
                            std::string(to_string(state)));
    }
    e.record.state = state;
    log_job(e.record);
    log_.flush();
    return e.record;
}

void ActivityStore::record_tick(const std::string& jobId, std::int64_t tick_ms) {
    std::unique_lock lock(mu_);
    auto& e = entry(jobId);
    e.record.lastTickAt_ms = std::max(e.record.lastTickAt_ms, tick_ms);
    log_job(e.record);
    log_.flush();
}

void ActivityStore::add_counts(const std::string& jobId, std::uint64_t gathered,
                               std::uint64_t deduplicated, std::uint64_t skipped) {
    std::unique_lock lock(mu_);
    auto& e = entry(jobId);
    e.record.counters.gathered += gathered;
    e.record.counters.deduplicated += deduplicated;
    e.record.counters.skipped += skipped;
    log_job(e.record);
    log_.flush();
}

void ActivityStore::add_request_units(const std::string& jobId, Platform p,
                                      std::uint64_t units) {
    std::unique_lock lock(mu_);
    auto& e = entry(jobId);
    e.record.counters.requestUnitsUsed[p] += units;
    log_job(e.record);
    log_.flush();
}

void ActivityStore::add_diagnostic(const std::string& jobId, std::string message) {
    std::unique_lock lock(mu_);
    auto& e = entry(jobId);
    e.record.diagnostics.push_back(std::move(message));
    log_job(e.record);
    log_.flush();
}

InsertResult ActivityStore::insert_activities(const std::string& jobId,
                                              const std::vector<ActivityPtr>& batch) {
    std::unique_lock lock(mu_);
    auto& e = entry(jobId);

    // intra-batch dedup: the same compound key twice counts once
    std::vector<ActivityPtr> unique;
    std::set<std::string> seen;
    for (const auto& a : batch) {
        if (!a || a->canonical_id().empty()) {
            throw StorageError("activity without canonical id in insert batch");
        }
        if (seen.insert(a->canonical_id()).second) unique.push_back(a);
    }

    InsertResult result;
    for (const auto& a : unique) {
        const std::string& key = a->canonical_id();
        auto idx = key_index_.find(key);
        OrderKey order;
        if (idx == key_index_.end()) {
            order = {a->start_epoch_ms(), key};
            ordered_[order] = a;
            key_index_[key] = order;
            ++result.inserted;
            if (log_.is_open()) {
                json op;
                op["op"] = "act";
                op["doc"] = activity_to_json(*a);
                log_line(op);
            }
        } else {
            order = idx->second;
            ++result.duplicates;
        }
        if (e.members.insert(order).second) {
            key_jobs_[key].insert(jobId);
            if (log_.is_open()) {
                json op;
                op["op"] = "link";
                op["job"] = jobId;
                op["key"] = key;
                log_line(op);
            }
        }
    }

    e.record.counters.gathered += result.inserted + result.duplicates;
    e.record.counters.deduplicated += result.duplicates;
    log_job(e.record);
    log_.flush();
    return result;
}

ActivityCollection ActivityStore::load_page(const std::string& jobId, std::size_t count,
                                            std::size_t offset) const {
    std::shared_lock lock(mu_);
    const auto& e = entry(jobId);
    ActivityCollection page;
    if (offset >= e.members.size()) {
        page.totalItems = 0;
        return page;
    }
    auto it = e.members.begin();
    std::advance(it, static_cast<std::ptrdiff_t>(offset));
    for (; it != e.members.end() && page.items.size() < count; ++it) {
        page.items.push_back(ordered_.at(*it));
    }
    page.totalItems = page.items.size();
    return page;
}

LoadByIdsResult ActivityStore::load_by_ids(const std::vector<std::string>& ids) const {
    std::shared_lock lock(mu_);
    LoadByIdsResult result;
    for (const auto& id : ids) {
        auto idx = key_index_.find(id);
        if (idx == key_index_.end()) {
            result.missing.push_back(id);
        } else {
            result.collection.items.push_back(ordered_.at(idx->second));
        }
    }
    result.collection.totalItems = result.collection.items.size();
    return result;
}

std::size_t ActivityStore::delete_job(const std::string& jobId) {
    std::unique_lock lock(mu_);
    auto it = jobs_.find(jobId);
    if (it == jobs_.end()) throw NotFoundError("unknown job: " + jobId);
    if (it->second.record.state == JobState::Running) {
        throw ConflictError("job is running; stop it first");
    }
    std::size_t removed = 0;
    for (const auto& member : it->second.members) {
        auto& owners = key_jobs_[member.second];
        owners.erase(jobId);
        if (owners.empty()) {
            key_jobs_.erase(member.second);
            key_index_.erase(member.second);
            ordered_.erase(member);
            ++removed;
        }
    }
    jobs_.erase(it);
    if (log_.is_open()) {
        json op;
        op["op"] = "drop-job";
        op["job"] = jobId;
        log_line(op);
        log_.flush();
    }
    return removed;
}

std::size_t ActivityStore::total_activities() const {
    std::shared_lock lock(mu_);
    return ordered_.size();
}

std::size_t ActivityStore::job_activity_count(const std::string& jobId) const {
    std::shared_lock lock(mu_);
    return entry(jobId).members.size();
}

std::optional<std::int64_t> ActivityStore::newest_start_ms(const std::string& jobId) const {
    std::shared_lock lock(mu_);
    const auto& members = entry(jobId).members;
    if (members.empty()) return std::nullopt;
    return members.rbegin()->first;
}

void ActivityStore::compact() {
    std::unique_lock lock(mu_);
    if (log_path_.empty()) return;
    auto tmp = log_path_;
    tmp += ".compact";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw StorageError("cannot write compacted log: " + tmp.string());
        for (const auto& [key, activity] : ordered_) {
            json op;
            op["op"] = "act";
            op["doc"] = activity_to_json(*activity);
            out << op.dump() << '\n';
        }
        for (const auto& [id, e] : jobs_) {
            json op;
            op["op"] = "job";
            op["record"] = job_to_json(e.record);
            out << op.dump() << '\n';
            for (const auto& member : e.members) {
                json link;
                link["op"] = "link";
                link["job"] = id;
                link["key"] = member.second;
                out << link.dump() << '\n';
            }
        }
    }
    log_.close();
    std::filesystem::rename(tmp, log_path_);
    log_.open(log_path_, std::ios::app);
    if (!log_) throw StorageError("cannot reopen store log: " + log_path_.string());
}

} // namespace smapi
