#pragma once

namespace pixad {

// Kernel variant selection. Auto resolves at runtime from CPUID; every variant
// produces bit-identical results (vectorization only across independent lanes),
// so the choice affects speed, never values.
enum class Isa { Auto, Scalar, Avx2 };

bool cpu_has_avx2();
// Auto -> Avx2 when compiled in and supported by the CPU, else Scalar.
Isa resolve_isa(Isa requested);
const char* isa_name(Isa isa);

}  // namespace pixad
