use super::GroupOp;
use crate::error::{Error, Result};

/// Swaps components `i` and `j` (1-based, `i < j`).
pub fn nielsen_alpha<E: GroupOp>(tuple: &[E], i: usize, j: usize) -> Result<Vec<E>> {
    let n = tuple.len();
    if i == 0 || i >= j {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    if j > n {
        return Err(Error::IndexOutOfRange { index: j, n });
    }
    let mut out = tuple.to_vec();
    out.swap(i - 1, j - 1);
    Ok(out)
}

/// `(g_1, g_2, ...) -> (g_2 g_1, g_2, ...)`.
pub fn nielsen_beta<E: GroupOp>(tuple: &[E]) -> Result<Vec<E>> {
    if tuple.len() < 2 {
        return Err(Error::IndexOutOfRange { index: 2, n: tuple.len() });
    }
    let mut out = tuple.to_vec();
    out[0] = tuple[1].op(&tuple[0]);
    Ok(out)
}
