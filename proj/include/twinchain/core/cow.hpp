/*
   Copyright 2026 The Twinchain Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <vector>

namespace twinchain {

// Copy-on-write containers. Copying one is O(buckets) and shares storage;
// the first write to a shared bucket clones only that bucket. Chain state
// is copied per block, so these keep snapshots cheap.

template <class K, class V, std::size_t Buckets = 64>
class CowMap {
 public:
  using Bucket = std::map<K, V>;

  [[nodiscard]] const V* find(const K& key) const {
    const auto& b = buckets_[index(key)];
    if (!b) return nullptr;
    auto it = b->find(key);
    return it == b->end() ? nullptr : &it->second;
  }

  [[nodiscard]] bool contains(const K& key) const { return find(key) != nullptr; }

  // Returns true when the key was not present before.
  bool insert_or_assign(const K& key, V value) {
    auto [it, inserted] = mutable_bucket(index(key)).insert_or_assign(key, std::move(value));
    if (inserted) ++size_;
    return inserted;
  }

  bool erase(const K& key) {
    auto i = index(key);
    if (!buckets_[i] || !buckets_[i]->contains(key)) return false;
    mutable_bucket(i).erase(key);
    --size_;
    return true;
  }

  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& b : buckets_) {
      if (!b) continue;
      for (const auto& [k, v] : *b) f(k, v);
    }
  }

 private:
  static std::size_t index(const K& key) { return std::hash<K>{}(key) % Buckets; }

  Bucket& mutable_bucket(std::size_t i) {
    auto& b = buckets_[i];
    if (!b) {
      b = std::make_shared<Bucket>();
    } else if (b.use_count() > 1) {
      b = std::make_shared<Bucket>(*b);
    }
    return *b;
  }

  std::array<std::shared_ptr<Bucket>, Buckets> buckets_{};
  std::size_t size_{0};
};

template <class T, std::size_t Chunk = 256>
class CowVector {
 public:
  [[nodiscard]] std::size_t size() const { return size_; }
  [[nodiscard]] bool empty() const { return size_ == 0; }

  const T& operator[](std::size_t i) const { return (*chunks_[i / Chunk])[i % Chunk]; }

  void push_back(T value) {
    if (size_ % Chunk == 0) {
      chunks_.push_back(std::make_shared<std::vector<T>>());
      chunks_.back()->reserve(Chunk);
    }
    mutable_chunk(chunks_.size() - 1).push_back(std::move(value));
    ++size_;
  }

  void set(std::size_t i, T value) { mutable_chunk(i / Chunk)[i % Chunk] = std::move(value); }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < size_; ++i) f((*this)[i]);
  }

 private:
  std::vector<T>& mutable_chunk(std::size_t c) {
    auto& p = chunks_[c];
    if (p.use_count() > 1) {
      auto copy = std::make_shared<std::vector<T>>(*p);
      copy->reserve(Chunk);
      p = std::move(copy);
    }
    return *p;
  }

  std::vector<std::shared_ptr<std::vector<T>>> chunks_;
  std::size_t size_{0};
};

}  // namespace twinchain
