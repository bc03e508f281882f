#pragma once

#include <atomic>
#include <cstddef>
#include <span>

namespace arock {

/// Backing store for reads that need more than a single scalar load, e.g. a
/// block-consistent snapshot taken on first touch.
class ReadSource {
 public:
  virtual ~ReadSource() = default;
  virtual double read(std::size_t j) = 0;
};

/// Read-only access to a coordinate vector. Operators see state only through
/// this type, so the same block kernel runs on a plain vector (simulator),
/// on atomically shared memory (engine) or on a lazily snapshotted copy.
class StateView {
 public:
  StateView() = default;
  StateView(std::span<const double> values) : plain_(values.data()), size_(values.size()) {}
  StateView(const std::atomic<double>* values, std::size_t n) : atomic_(values), size_(n) {}
  StateView(ReadSource* source, std::size_t n) : source_(source), size_(n) {}

  double operator[](std::size_t j) const {
    if (plain_) return plain_[j];
    if (atomic_) return atomic_[j].load(std::memory_order_relaxed);
    return source_->read(j);
  }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

 private:
  const double* plain_ = nullptr;
  const std::atomic<double>* atomic_ = nullptr;
  ReadSource* source_ = nullptr;
  std::size_t size_ = 0;
};

/// Additive writer for auxiliary caches (Ax, running means). Shared caches
/// take a fetch-add per scalar; private copies take a plain add.
class AuxSink {
 public:
  AuxSink() = default;
  AuxSink(std::span<double> values) : plain_(values.data()), size_(values.size()) {}
  AuxSink(std::atomic<double>* values, std::size_t n) : atomic_(values), size_(n) {}

  void add(std::size_t j, double v) const {
    if (plain_)
      plain_[j] += v;
    else
      atomic_[j].fetch_add(v, std::memory_order_relaxed);
  }
  std::size_t size() const { return size_; }

 private:
  double* plain_ = nullptr;
  std::atomic<double>* atomic_ = nullptr;
  std::size_t size_ = 0;
};

}  // namespace arock
