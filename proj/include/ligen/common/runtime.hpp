#pragma once

namespace ligen {

// Keeps freed training buffers in the heap instead of returning them to the
// OS after every batch (glibc only; no-op elsewhere). Call once from main().
void configure_allocator() noexcept;

}  // namespace ligen
