// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eigengs {

namespace {

thread_local bool t_in_worker = false;

class Pool {
public:
    explicit Pool(unsigned threads) {
        for (unsigned i = 1; i < threads; ++i) {
            workers_.emplace_back([this] { loop(); });
        }
    }

    ~Pool() {
        {
            std::lock_guard lock(mutex_);
            stop_ = true;
        }
        wake_.notify_all();
        for (auto& w : workers_) w.join();
    }

    void run(std::size_t count, const std::function<void(std::size_t)>& body) {
        std::lock_guard serial(submit_mutex_);
        {
            std::lock_guard lock(mutex_);
            body_ = &body;
            count_ = count;
            next_.store(0);
            active_ = workers_.size();
            error_ = nullptr;
            ++generation_;
        }
        wake_.notify_all();
        drain();
        std::unique_lock lock(mutex_);
        done_.wait(lock, [this] { return active_ == 0; });
        body_ = nullptr;
        if (error_) std::rethrow_exception(error_);
    }

private:
    void drain() {
        const bool was_worker = t_in_worker;
        t_in_worker = true;
        for (;;) {
            const std::size_t i = next_.fetch_add(1);
            if (i >= count_) break;
            try {
                (*body_)(i);
            } catch (...) {
                std::lock_guard lock(mutex_);
                if (!error_) error_ = std::current_exception();
            }
        }
        t_in_worker = was_worker;
    }

    void loop() {
        std::size_t seen = 0;
        for (;;) {
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            drain();
            {
                std::lock_guard lock(mutex_);
                if (--active_ == 0) done_.notify_one();
            }
        }
    }

    std::vector<std::thread> workers_;
    std::mutex submit_mutex_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* body_ = nullptr;
    std::size_t count_ = 0;
    std::atomic<std::size_t> next_{0};
    std::size_t active_ = 0;
    std::size_t generation_ = 0;
    std::exception_ptr error_;
    bool stop_ = false;
};

Pool& pool() {
    static Pool instance(worker_count());
    return instance;
}

} // namespace

unsigned worker_count() {
    static const unsigned count = [] {
        if (const char* env = std::getenv("EIGENGS_THREADS")) {
            const long n = std::strtol(env, nullptr, 10);
            if (n > 0) return static_cast<unsigned>(n);
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1u : hw;
    }();
    return count;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
    if (count == 0) return;
    if (t_in_worker || count == 1 || worker_count() == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    pool().run(count, body);
}

} // namespace eigengs
