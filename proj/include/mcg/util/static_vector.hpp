#pragma once

#include <cassert>
#include <cstdint>

namespace mcg {

// Fixed-capacity vector for hot paths (action lists, search stacks).
// No heap traffic; elements must be trivially copyable.
template <typename T, int Capacity>
class StaticVector {
 public:
  void push_back(const T& v) {
    assert(size_ < Capacity);
    data_[size_++] = v;
  }
  void clear() { size_ = 0; }

  T& operator[](int i) { return data_[i]; }
  const T& operator[](int i) const { return data_[i]; }

  int size() const { return size_; }
  bool empty() const { return size_ == 0; }

  T* begin() { return data_; }
  T* end() { return data_ + size_; }
  const T* begin() const { return data_; }
  const T* end() const { return data_ + size_; }
  const T& back() const { return data_[size_ - 1]; }

 private:
  T data_[Capacity];
  int size_ = 0;
};

}  // namespace mcg
