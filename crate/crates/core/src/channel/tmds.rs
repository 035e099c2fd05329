//! TMDS 8b/10b line code as used by DVI and HDMI video data periods.
//!
//! Symbols are serialized least significant bit first.

/// One encoded 10-bit symbol and the running disparity after sending it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TmdsSymbol {
    pub bits: u16,
    pub disparity_after: i32,
}

/// Stage one: transition minimization. Returns 9 bits; bit 8 is set when the
/// XOR chain was used and clear for the XNOR chain.
pub fn minimize_transitions(value: u8) -> u16 {
    let ones = value.count_ones();
    let use_xnor = ones > 4 || (ones == 4 && value & 1 == 0);
    let mut q = (value & 1) as u16;
    let mut prev = value & 1;
    for i in 1..8 {
        let d = (value >> i) & 1;
        let mut bit = prev ^ d;
        if use_xnor {
            bit ^= 1;
        }
        q |= (bit as u16) << i;
        prev = bit;
    }
    if !use_xnor {
        q |= 1 << 8;
    }
    q
}

/// Encodes one data byte given the running disparity of the link.
pub fn tmds_encode(value: u8, disparity_in: i32) -> TmdsSymbol {
    let q_m = minimize_transitions(value);
    let data = (q_m & 0xff) as u8;
    let xor_chain = q_m & 0x100 != 0;
    let n1 = data.count_ones() as i32;
    let n0 = 8 - n1;
    let cnt = disparity_in;

    let (invert, disparity_after) = if cnt == 0 || n1 == n0 {
        if xor_chain {
            (false, cnt + (n1 - n0))
        } else {
            (true, cnt + (n0 - n1))
        }
    } else if (cnt > 0 && n1 > n0) || (cnt < 0 && n0 > n1) {
        (true, cnt + 2 * xor_chain as i32 + (n0 - n1))
    } else {
        (false, cnt - 2 * (!xor_chain) as i32 + (n1 - n0))
    };

    let low = if invert { !data } else { data } as u16;
    let bits = low | ((xor_chain as u16) << 8) | ((invert as u16) << 9);
    TmdsSymbol { bits, disparity_after }
}

/// Recovers the data byte from a 10-bit symbol.
pub fn tmds_decode(bits: u16) -> u8 {
    let mut d = (bits & 0xff) as u8;
    if bits & 0x200 != 0 {
        d = !d;
    }
    let xor_chain = bits & 0x100 != 0;
    let mut out = d & 1;
    for i in 1..8 {
        let mut bit = ((d >> i) ^ (d >> (i - 1))) & 1;
        if !xor_chain {
            bit ^= 1;
        }
        out |= bit << i;
    }
    out
}

/// Number of level changes when `bits` goes out on the wire, counting the
/// boundary against the last bit of the previous symbol when there is one.
pub fn serial_transitions(bits: u16, prev_last_bit: Option<bool>) -> u32 {
    let inner = ((bits ^ (bits >> 1)) & 0x1ff).count_ones();
    let boundary = prev_last_bit.is_some_and(|b| b != (bits & 1 != 0));
    inner + boundary as u32
}

/// Encodes a run of bytes starting from zero disparity.
pub fn encode_stream(values: impl IntoIterator<Item = u8>) -> Vec<TmdsSymbol> {
    let mut cnt = 0;
    values
        .into_iter()
        .map(|v| {
            let s = tmds_encode(v, cnt);
            cnt = s.disparity_after;
            s
        })
        .collect()
}

/// Transition count of every symbol of an encoded scanline, including the
/// boundary bit between consecutive symbols.
pub fn stream_transitions(symbols: &[TmdsSymbol]) -> Vec<u32> {
    let mut prev = None;
    symbols
        .iter()
        .map(|s| {
            let t = serial_transitions(s.bits, prev);
            prev = Some(s.bits & 0x200 != 0);
            t
        })
        .collect()
}
