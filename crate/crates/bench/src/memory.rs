//! Peak memory measurement.
//!
//! On Linux the process peak resident set (`VmHWM` in `/proc/self/status`)
//! is used, reset before each run by writing `5` to `/proc/self/clear_refs`.
//! Elsewhere, or when the reset is not permitted, the fallback is the heap
//! high-water mark tracked by [`CountingAllocator`], which only works when a
//! binary installs it as its `#[global_allocator]`.

use std::alloc::{GlobalAlloc, Layout, System};
use std::fmt;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);
static INSTALLED: AtomicBool = AtomicBool::new(false);

/// System allocator wrapper that tracks live and peak heap bytes.
pub struct CountingAllocator;

impl CountingAllocator {
    pub fn is_installed() -> bool {
        INSTALLED.load(Ordering::Relaxed)
    }

    pub fn current_bytes() -> usize {
        CURRENT.load(Ordering::Relaxed)
    }

    pub fn peak_bytes() -> usize {
        PEAK.load(Ordering::Relaxed)
    }

    /// Restarts the high-water mark from the current live size.
    pub fn reset_peak() {
        PEAK.store(CURRENT.load(Ordering::Relaxed), Ordering::Relaxed);
    }

    fn grew(by: usize) {
        let now = CURRENT.fetch_add(by, Ordering::Relaxed) + by;
        PEAK.fetch_max(now, Ordering::Relaxed);
    }
}

unsafe impl GlobalAlloc for CountingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        INSTALLED.store(true, Ordering::Relaxed);
        let ptr = System.alloc(layout);
        if !ptr.is_null() {
            Self::grew(layout.size());
        }
        ptr
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        INSTALLED.store(true, Ordering::Relaxed);
        let ptr = System.alloc_zeroed(layout);
        if !ptr.is_null() {
            Self::grew(layout.size());
        }
        ptr
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let new = System.realloc(ptr, layout, new_size);
        if !new.is_null() {
            if new_size >= layout.size() {
                Self::grew(new_size - layout.size());
            } else {
                CURRENT.fetch_sub(layout.size() - new_size, Ordering::Relaxed);
            }
        }
        new
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemorySource {
    /// Kernel-reported peak resident set of the whole process.
    ProcessPeakRss,
    /// Peak live heap bytes seen by [`CountingAllocator`].
    HeapHighWater,
    Unavailable,
}

impl MemorySource {
    pub fn name(&self) -> &'static str {
        match self {
            MemorySource::ProcessPeakRss => "process-peak-rss",
            MemorySource::HeapHighWater => "heap-high-water",
            MemorySource::Unavailable => "unavailable",
        }
    }
}

impl fmt::Display for MemorySource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Measures the peak memory of one run: call [`reset`](Self::reset) before
/// and [`peak_bytes`](Self::peak_bytes) after.
#[derive(Clone, Copy, Debug)]
pub struct PeakMeter {
    source: MemorySource,
}

impl PeakMeter {
    /// Picks the best source this process supports.
    pub fn detect() -> Self {
        let source = if reset_rss_peak() && read_rss_peak().is_some() {
            MemorySource::ProcessPeakRss
        } else if CountingAllocator::is_installed() {
            MemorySource::HeapHighWater
        } else {
            MemorySource::Unavailable
        };
        Self { source }
    }

    pub fn with_source(source: MemorySource) -> Self {
        Self { source }
    }

    pub fn source(&self) -> MemorySource {
        self.source
    }

    pub fn reset(&self) {
        match self.source {
            MemorySource::ProcessPeakRss => {
                reset_rss_peak();
            }
            MemorySource::HeapHighWater => CountingAllocator::reset_peak(),
            MemorySource::Unavailable => {}
        }
    }

    pub fn peak_bytes(&self) -> u64 {
        match self.source {
            MemorySource::ProcessPeakRss => read_rss_peak().unwrap_or(0),
            MemorySource::HeapHighWater => CountingAllocator::peak_bytes() as u64,
            MemorySource::Unavailable => 0,
        }
    }
}

#[cfg(target_os = "linux")]
fn reset_rss_peak() -> bool {
    std::fs::write("/proc/self/clear_refs", "5").is_ok()
}

#[cfg(not(target_os = "linux"))]
fn reset_rss_peak() -> bool {
    false
}

/// `VmHWM` in bytes.
#[cfg(target_os = "linux")]
pub fn read_rss_peak() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[cfg(not(target_os = "linux"))]
pub fn read_rss_peak() -> Option<u64> {
    None
}
