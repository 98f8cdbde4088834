use super::SimError;

/// Debounced force threshold on the emulated normal GRF.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TouchdownDetector {
    pub threshold: f64,
    pub debounce: u32,
    count: u32,
}

impl TouchdownDetector {
    pub fn new(threshold: f64, debounce: u32) -> Self {
        Self { threshold, debounce, count: 0 }
    }

    /// Feeds one tick of normal force; true once it exceeded the threshold
    /// for `debounce` consecutive ticks.
    pub fn update(&mut self, grf_normal: f64) -> bool {
        if grf_normal > self.threshold {
            self.count = self.count.saturating_add(1);
        } else {
            self.count = 0;
        }
        self.count >= self.debounce
    }

    pub fn reset(&mut self) {
        self.count = 0;
    }
}

/// Stateless form of the detector over a window of ticks ending now.
pub fn detect_touchdown(history: &[f64], threshold: f64, debounce: u32) -> bool {
    let n = debounce as usize;
    n > 0 && history.len() >= n && history[history.len() - n..].iter().all(|&f| f > threshold)
}

/// Bounds of the trunk-height reflex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeightReflexParams {
    /// Largest drop applied for one workspace-limit event.
    pub max_drop: f64,
    /// Lowest admissible height target.
    pub min_height: f64,
}

impl Default for HeightReflexParams {
    fn default() -> Self {
        Self { max_drop: 0.10, min_height: 0.35 }
    }
}

/// New height target after a searching motion overran the workspace by
/// `search_overrun`.
pub fn height_reflex(search_overrun: f64, h_r_target: f64, params: &HeightReflexParams) -> Result<f64, SimError> {
    let drop = search_overrun.max(0.0).min(params.max_drop);
    let h = h_r_target - drop;
    if h < params.min_height {
        return Err(SimError::HeightBelowMinimum { target: h, min: params.min_height });
    }
    Ok(h)
}
