//! Axis-aligned boxes in sketch pixel coordinates and their overlap measures.

use core::fmt;

/// Axis-aligned rectangle with strictly positive area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    x_min: f64,
    y_min: f64,
    x_max: f64,
    y_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum BoxError {
    #[error("coordinate is not a finite number")]
    NonFinite,
    #[error("coordinate is negative")]
    Negative,
    #[error("inverted or degenerate box (min must be strictly below max)")]
    Inverted,
}

impl BoundingBox {
    pub fn new(x_min: f64, y_min: f64, x_max: f64, y_max: f64) -> Result<Self, BoxError> {
        let coords = [x_min, y_min, x_max, y_max];
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(BoxError::NonFinite);
        }
        if coords.iter().any(|c| *c < 0.0) {
            return Err(BoxError::Negative);
        }
        if x_min >= x_max || y_min >= y_max {
            return Err(BoxError::Inverted);
        }
        Ok(Self {
            x_min,
            y_min,
            x_max,
            y_max,
        })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn y_min(&self) -> f64 {
        self.y_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn y_max(&self) -> f64 {
        self.y_max
    }

    pub fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn height(&self) -> f64 {
        self.y_max - self.y_min
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.x_min, self.y_min, self.x_max, self.y_max]
    }
}

impl fmt::Display for BoundingBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.x_min, self.y_min, self.x_max, self.y_max
        )
    }
}

/// Length of the intersection of `[a_min, a_max]` and `[b_min, b_max]`, clamped at zero.
pub fn interval_overlap(a_min: f64, a_max: f64, b_min: f64, b_max: f64) -> f64 {
    let len = a_max.min(b_max) - a_min.max(b_min);
    if len > 0.0 {
        len
    } else {
        0.0
    }
}

/// Overlap lengths `(dx, dy)` of two boxes along each axis.
pub fn overlap_lengths(b1: &BoundingBox, b2: &BoundingBox) -> (f64, f64) {
    (
        interval_overlap(b1.x_min, b1.x_max, b2.x_min, b2.x_max),
        interval_overlap(b1.y_min, b1.y_max, b2.y_min, b2.y_max),
    )
}

/// Area of the overlapped region, `dx * dy`.
pub fn overlap_area(b1: &BoundingBox, b2: &BoundingBox) -> f64 {
    let (dx, dy) = overlap_lengths(b1, b2);
    dx * dy
}

/// Denominator used when turning an overlap area into a ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RatioMode {
    /// Intersection over the smaller box's area. Reports full containment as 1.
    #[default]
    MinArea,
    /// Intersection over union.
    Iou,
}

impl RatioMode {
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "min-area" => Some(RatioMode::MinArea),
            "iou" => Some(RatioMode::Iou),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RatioMode::MinArea => "min-area",
            RatioMode::Iou => "iou",
        }
    }
}

/// Overlap ratio in `[0, 1]` using the min-area denominator.
pub fn overlap_ratio(b1: &BoundingBox, b2: &BoundingBox) -> f64 {
    overlap_ratio_with(b1, b2, RatioMode::MinArea)
}

pub fn overlap_ratio_with(b1: &BoundingBox, b2: &BoundingBox, mode: RatioMode) -> f64 {
    let inter = overlap_area(b1, b2);
    if inter == 0.0 {
        return 0.0;
    }
    let denom = match mode {
        RatioMode::MinArea => b1.area().min(b2.area()),
        RatioMode::Iou => b1.area() + b2.area() - inter,
    };
    (inter / denom).clamp(0.0, 1.0)
}
