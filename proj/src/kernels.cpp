#include <grasp/kernels.hpp>

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace grasp::kernels {
namespace {

bool cpu_has_avx2() noexcept
{
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* initial_table() noexcept
{
    const KernelTable* simd = avx2_table();
    if (const char* env = std::getenv("GRASP_SIMD")) {
        const std::string_view choice(env);
        if (choice == "scalar") {
            return &scalar_table();
        }
    }
    return simd != nullptr ? simd : &scalar_table();
}

std::atomic<const KernelTable*>& current() noexcept
{
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

} // namespace

#if !defined(GRASP_HAVE_AVX2_KERNELS)
namespace detail {
const KernelTable* avx2_table_unchecked() noexcept
{
    return nullptr;
}
} // namespace detail
#endif

const KernelTable* avx2_table() noexcept
{
    static const KernelTable* table = cpu_has_avx2() ? detail::avx2_table_unchecked() : nullptr;
    return table;
}

const KernelTable& active() noexcept
{
    return *current().load(std::memory_order_relaxed);
}

bool select(Isa isa) noexcept
{
    const KernelTable* table = isa == Isa::scalar ? &scalar_table() : avx2_table();
    if (table == nullptr) {
        return false;
    }
    current().store(table, std::memory_order_relaxed);
    return true;
}

} // namespace grasp::kernels
