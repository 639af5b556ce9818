#pragma once

#include <memory>
#include <thread>

#include "smapi/enrichment.hpp"
#include "smapi/gathering.hpp"
#include "smapi/service_config.hpp"
#include "smapi/storage.hpp"

namespace httplib {
class Server;
}

namespace smapi {

// REST surface:
//   POST /SocialMediaAPI/crawlService                  create crawl job (201)
//   GET  /SocialMediaAPI/crawlService/allJobs          job summaries
//   GET  /SocialMediaAPI/crawlService/{crawljobId}     activities (count/offset)
//   GET  /SocialMediaAPI/crawlService/{crawljobId}/status
//   POST /SocialMediaAPI/crawlService/{crawljobId}/stop
//   POST /SocialMediaAPI/searchService                 one-time search
//   POST /SocialMediaAPI/enrichment                    enrich posted activities
// Every non-2xx response carries {"error", "message", "fields"?}.
class HttpService {
public:
    HttpService(GatheringService& gathering, ActivityStore& store, const Enricher& enricher,
                ServiceConfig config);
    ~HttpService();

    // Blocks serving on config host/port; runs the crawl scheduler alongside.
    bool serve();

    // Test/embedding entry: binds an ephemeral port, serves on background
    // threads and returns the port.
    int start_async();
    void stop();

private:
    void install_routes();
    void scheduler_loop();

    GatheringService& gathering_;
    ActivityStore& store_;
    const Enricher& enricher_;
    ServiceConfig config_;
    std::unique_ptr<httplib::Server> server_;
    std::thread listener_;
    std::thread scheduler_;
    std::atomic<bool> stopping_{false};
};

} // namespace smapi
