#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>

namespace sessionflow {

// Blocking FIFO with a fixed capacity. push() waits while full, pop() waits
// while empty; close() releases every waiter.
//
// The queue also tracks "resident" items: an item is resident from the
// moment it is pushed until a consumer calls release() for it, so the
// resident count covers both queued and in-flight work.
template <class T>
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t capacity) : capacity_(capacity == 0 ? 1 : capacity) {}

    BoundedQueue(const BoundedQueue&) = delete;
    BoundedQueue& operator=(const BoundedQueue&) = delete;

    // Returns false if the queue was closed before the item could be added.
    bool push(T item) {
        std::unique_lock lock(mutex_);
        not_full_.wait(lock, [&] { return closed_ || items_.size() < capacity_; });
        if (closed_) {
            return false;
        }
        items_.push_back(std::move(item));
        ++resident_;
        if (resident_ > peak_resident_) {
            peak_resident_ = resident_;
        }
        not_empty_.notify_one();
        return true;
    }

    // Returns nullopt once the queue is closed and drained.
    std::optional<T> pop() {
        std::unique_lock lock(mutex_);
        not_empty_.wait(lock, [&] { return closed_ || !items_.empty(); });
        if (items_.empty()) {
            return std::nullopt;
        }
        T item = std::move(items_.front());
        items_.pop_front();
        not_full_.notify_one();
        return item;
    }

    void release() {
        std::lock_guard lock(mutex_);
        --resident_;
    }

    // Wakes all waiters. Items still queued remain poppable unless
    // `discard` is set.
    void close(bool discard = false) {
        std::lock_guard lock(mutex_);
        closed_ = true;
        if (discard) {
            resident_ -= items_.size();
            items_.clear();
        }
        not_full_.notify_all();
        not_empty_.notify_all();
    }

    std::size_t capacity() const noexcept { return capacity_; }

    std::size_t peak_resident() const {
        std::lock_guard lock(mutex_);
        return peak_resident_;
    }

private:
    const std::size_t capacity_;
    mutable std::mutex mutex_;
    std::condition_variable not_full_;
    std::condition_variable not_empty_;
    std::deque<T> items_;
    std::size_t resident_ = 0;
    std::size_t peak_resident_ = 0;
    bool closed_ = false;
};

}  // namespace sessionflow
