//! Fixed significant-digit display of capacities.

use colorcap::Capacity;

/// `x` to `digits` significant digits, ties to even on the exact binary
/// value. Integers print without a fractional part, so `1.0` is `"1"`.
pub fn significant(x: f64, digits: usize) -> String {
    assert!(digits >= 1, "need at least one significant digit");
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    if x.fract() == 0.0 && x.abs() < 1e15 {
        return format!("{x:.0}");
    }
    let sign = if x < 0.0 { "-" } else { "" };
    // Exact decimal expansion: every f64 has a finite one and 800 digits
    // always reach its end.
    let sci = format!("{:.800e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let mut exp: i32 = exp.parse().expect("integer exponent");
    let all: Vec<u8> = mantissa.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
    let mut kept: Vec<u8> = all[..digits].to_vec();
    let rest = &all[digits..];
    let round_up = match rest.first() {
        Some(&d) if d > 5 => true,
        Some(&5) => rest[1..].iter().any(|&d| d != 0) || kept[digits - 1] % 2 == 1,
        _ => false,
    };
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                kept.insert(0, 1);
                kept.pop();
                exp += 1;
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    let text: String = kept.iter().map(|d| char::from(b'0' + d)).collect();
    let body = if exp < 0 {
        format!("0.{}{}", "0".repeat((-exp - 1) as usize), text)
    } else {
        let int_len = exp as usize + 1;
        if int_len >= digits {
            format!("{}{}", text, "0".repeat(int_len - digits))
        } else {
            format!("{}.{}", &text[..int_len], &text[int_len..])
        }
    };
    format!("{sign}{body}")
}

/// Table form: five significant digits, `[lower,upper]` for bounds.
pub fn capacity_display(c: &Capacity) -> String {
    match *c {
        Capacity::Exact { value } => significant(value, 5),
        Capacity::Bounds { lower, upper } => {
            format!("[{},{}]", significant(lower, 5), significant(upper, 5))
        }
    }
}
