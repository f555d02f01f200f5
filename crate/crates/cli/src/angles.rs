//! Angle and number-list parsing: radians or rational multiples of π.

use std::f64::consts::PI;

/// Parses `1.936`, `pi`, `-pi/8`, `3pi/7`, `3*pi/4` or `2.5pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim().to_ascii_lowercase().replace('π', "pi");
    if t.is_empty() {
        return Err("empty angle".into());
    }
    let value = match t.find("pi") {
        None => t.parse::<f64>().map_err(|_| format!("cannot parse angle `{text}`"))?,
        Some(at) => {
            let coef = t[..at].trim_end_matches('*').trim();
            let coef = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("bad coefficient in `{text}`"))?,
            };
            let rest = t[at + 2..].trim();
            let denom = match rest {
                "" => 1.0,
                r => r
                    .strip_prefix('/')
                    .and_then(|d| d.trim().parse::<f64>().ok())
                    .filter(|d| *d != 0.0)
                    .ok_or_else(|| format!("bad denominator in `{text}`"))?,
            };
            coef * PI / denom
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle `{text}` is not finite"))
    }
}

pub fn parse_angle_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',').map(parse_angle).collect()
}

pub fn parse_number_list(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("cannot parse number `{x}`"))
        })
        .collect()
}

/// Seed lists separated by `;`, e.g. `2.3,0.8;pi/2,pi/5`.
pub fn parse_seed_lists(text: &str) -> Result<Vec<Vec<f64>>, String> {
    text.split(';').filter(|s| !s.trim().is_empty()).map(parse_angle_list).collect()
}
