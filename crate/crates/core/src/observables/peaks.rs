use super::GridProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub x: f64,
    pub height: f64,
}

/// Local maxima of `|ψ|²`, sorted by position.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeakSet {
    pub peaks: Vec<Peak>,
}

impl PeakSet {
    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    /// Distance between the outermost peaks, if there are at least two.
    pub fn separation(&self) -> Option<f64> {
        match (self.peaks.first(), self.peaks.last()) {
            (Some(l), Some(r)) if self.peaks.len() >= 2 => Some(r.x - l.x),
            _ => None,
        }
    }
}

/// Strict interior maxima of `profile.abs2`, refined by a parabola through
/// the node and its neighbours. A plateau counts once, at its leftmost node.
pub fn find_peaks(profile: &GridProfile) -> PeakSet {
    let (x, y) = (&profile.x, &profile.abs2);
    let n = y.len().min(x.len());
    let mut peaks = Vec::new();
    let mut j = 1;
    while j + 1 < n {
        if y[j] > y[j - 1] {
            let mut k = j;
            while k + 1 < n && y[k + 1] == y[j] {
                k += 1;
            }
            if k + 1 < n && y[k + 1] < y[j] && y[j] > 0.0 {
                peaks.push(refine(x, y, j));
            }
            j = k + 1;
        } else {
            j += 1;
        }
    }
    PeakSet { peaks }
}

fn refine(x: &[f64], y: &[f64], j: usize) -> Peak {
    let (y0, y1, y2) = (y[j - 1], y[j], y[j + 1]);
    let curv = y0 - 2.0 * y1 + y2;
    if curv >= 0.0 {
        return Peak { x: x[j], height: y1 };
    }
    let offset = (0.5 * (y0 - y2) / curv).clamp(-0.5, 0.5);
    let h = if offset >= 0.0 { x[j + 1] - x[j] } else { x[j] - x[j - 1] };
    Peak { x: x[j] + offset * h, height: y1 - 0.25 * (y0 - y2) * offset }
}
