#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <future>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace sessionflow {

// Fixed set of stage-1 reducer threads ("lanes"). Tasks are independent and
// share no mutable state; results come back through futures.
class LanePool {
public:
    explicit LanePool(std::size_t lanes);
    ~LanePool();

    LanePool(const LanePool&) = delete;
    LanePool& operator=(const LanePool&) = delete;

    std::size_t lanes() const noexcept { return threads_.size(); }

    template <class F>
    auto submit(F&& fn) -> std::future<std::invoke_result_t<F&>> {
        using R = std::invoke_result_t<F&>;
        auto task = std::make_shared<std::packaged_task<R()>>(std::forward<F>(fn));
        std::future<R> result = task->get_future();
        enqueue([task] { (*task)(); });
        return result;
    }

private:
    void enqueue(std::function<void()> job);
    void loop();

    std::mutex mutex_;
    std::condition_variable ready_;
    std::deque<std::function<void()>> jobs_;
    bool stopping_ = false;
    std::vector<std::thread> threads_;
};

}  // namespace sessionflow
