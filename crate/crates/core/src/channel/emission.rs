use super::tmds::{serial_transitions, tmds_encode};
use super::{apply_receiver, expect, map_rows, ChannelConfig, ChannelError, Standard};
use crate::raster::{Bitmap, Polarity};

/// Analog video: emission follows the luminance step between neighbouring
/// pixels of the same scanline.
pub fn vga_emission(screen: &Bitmap, cfg: &ChannelConfig) -> Result<Bitmap, ChannelError> {
    expect(cfg, Standard::Vga)?;
    let mut raw = Bitmap::blank(screen.width(), screen.height(), Polarity::LightOnDark);
    map_rows(screen, &mut raw, |_, src, dst| {
        dst[0] = 0;
        for x in 1..src.len() {
            dst[x] = src[x].abs_diff(src[x - 1]);
        }
    });
    apply_receiver(&raw, cfg)
}

/// Digital video: each pixel's luminance is TMDS encoded (running disparity
/// restarts every row) and the emission is proportional to the number of
/// bit transitions in its serialized symbol.
pub fn tmds_emission(screen: &Bitmap, cfg: &ChannelConfig) -> Result<Bitmap, ChannelError> {
    expect(cfg, Standard::Dvi)?;
    let mut raw = Bitmap::blank(screen.width(), screen.height(), Polarity::LightOnDark);
    map_rows(screen, &mut raw, |_, src, dst| {
        let mut cnt = 0;
        let mut prev = None;
        for (d, &v) in dst.iter_mut().zip(src) {
            let sym = tmds_encode(v, cnt);
            cnt = sym.disparity_after;
            let t = serial_transitions(sym.bits, prev);
            prev = Some(sym.bits & 0x200 != 0);
            *d = ((t * 255 + 5) / 10) as u8;
        }
    });
    apply_receiver(&raw, cfg)
}

/// Binary ink bits, one stream per laser diode.
fn printer_raw(page: &Bitmap, diodes: usize) -> Bitmap {
    let (w, h) = (page.width(), page.height());
    let mut raw = Bitmap::blank(w, h, Polarity::LightOnDark);
    for stream in 0..diodes {
        let mut last: Option<bool> = None;
        for r in (stream..h).step_by(diodes) {
            for x in 0..w {
                let bit = page.is_ink(x, r);
                if last.is_some_and(|b| b != bit) {
                    raw.set(x, r, 255);
                }
                last = Some(bit);
            }
        }
    }
    raw
}

/// Laser printer: scanlines are thresholded to ink bits and dealt round-robin
/// to `printer_diodes` serial streams; each stream radiates at its own bit
/// transitions.
pub fn printer_emission(page: &Bitmap, cfg: &ChannelConfig) -> Result<Bitmap, ChannelError> {
    expect(cfg, Standard::Printer)?;
    apply_receiver(&printer_raw(page, cfg.printer_diodes as usize), cfg)
}

/// Energy of each diode stream before the receiver stage.
pub fn printer_stream_energies(page: &Bitmap, cfg: &ChannelConfig) -> Result<Vec<u64>, ChannelError> {
    expect(cfg, Standard::Printer)?;
    let d = cfg.printer_diodes as usize;
    let raw = printer_raw(page, d);
    let mut e = vec![0u64; d];
    for (r, row) in raw.rows().enumerate() {
        e[r % d] += row.iter().map(|&v| (v as u64) * (v as u64)).sum::<u64>();
    }
    Ok(e)
}
