//! Deterministic work distribution.
//!
//! Both helpers combine integer results in index order, so the output
//! is identical for every thread count.

/// Sum of `f(i)` over `0..jobs`, split across `threads` workers.
pub fn sum_over<F>(jobs: u64, threads: usize, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    if threads <= 1 || jobs <= 1 {
        return (0..jobs).map(f).sum();
    }
    let workers = threads.min(jobs as usize);
    let chunk = jobs.div_ceil(workers as u64);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u64)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let begin = w * chunk;
                    let end = (begin + chunk).min(jobs);
                    (begin..end).map(f).sum::<u64>()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).sum()
    })
}

/// Per-step counts pooled over `replicas` indicator vectors of length
/// `steps`, split across `threads` workers.
pub fn pooled_counts<F>(replicas: u32, steps: usize, threads: usize, f: F) -> Vec<u32>
where
    F: Fn(u32) -> Vec<bool> + Sync,
{
    let accumulate = |counts: &mut Vec<u32>, indicators: Vec<bool>| {
        for (count, crossed) in counts.iter_mut().zip(indicators) {
            *count += u32::from(crossed);
        }
    };

    if threads <= 1 || replicas <= 1 {
        let mut counts = vec![0u32; steps];
        for replica in 0..replicas {
            accumulate(&mut counts, f(replica));
        }
        return counts;
    }

    let workers = threads.min(replicas as usize);
    let chunk = replicas.div_ceil(workers as u32);
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers as u32)
            .map(|w| {
                let f = &f;
                scope.spawn(move || {
                    let begin = w * chunk;
                    let end = (begin + chunk).min(replicas);
                    let mut partial = vec![0u32; steps];
                    for replica in begin..end {
                        accumulate(&mut partial, f(replica));
                    }
                    partial
                })
            })
            .collect();
        let mut counts = vec![0u32; steps];
        for handle in handles {
            for (total, part) in counts.iter_mut().zip(handle.join().expect("worker")) {
                *total += part;
            }
        }
        counts
    })
}
