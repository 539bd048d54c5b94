//
// Copyright 2026 The AVEC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "avec/kernels.h"
#include "kernels/kernels_internal.h"

namespace avec::kernels {
namespace {

const KernelTable kScalarTable = {
    Isa::kScalar,          &scalar::FillUniform, &scalar::KaryRr,
    &scalar::BinaryRr,     &scalar::CountEqual,
};

#if defined(AVEC_HAVE_AVX2)
const KernelTable kAvx2Table = {
    Isa::kAvx2,          &avx2::FillUniform, &avx2::KaryRr,
    &avx2::BinaryRr,     &avx2::CountEqual,
};
#endif

const KernelTable* SelectDefault() {
  const char* forced = std::getenv("AVEC_ISA");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
    return &kScalarTable;
  }
  if (CpuSupports(Isa::kAvx2)) {
    if (const KernelTable* t = Avx2Kernels()) return t;
  }
  return &kScalarTable;
}

std::atomic<const KernelTable*> g_override{nullptr};

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& ScalarKernels() { return kScalarTable; }

const KernelTable* Avx2Kernels() {
#if defined(AVEC_HAVE_AVX2)
  return &kAvx2Table;
#else
  return nullptr;
#endif
}

bool CpuSupports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(AVEC_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& Active() {
  if (const KernelTable* forced = g_override.load(std::memory_order_acquire)) {
    return *forced;
  }
  static const KernelTable* const selected = SelectDefault();
  return *selected;
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(g_override.load()) {
  const KernelTable* table = &kScalarTable;
  if (isa == Isa::kAvx2 && CpuSupports(Isa::kAvx2)) table = Avx2Kernels();
  g_override.store(table, std::memory_order_release);
}

ScopedIsa::~ScopedIsa() {
  g_override.store(previous_, std::memory_order_release);
}

}  // namespace avec::kernels
