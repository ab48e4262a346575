use fpp_env::{Bond, BondDir, Highway, Rect};

/// Dense per-bond maximum HV class over a rectangle; 0 means no HV highway.
#[derive(Clone, Debug)]
pub struct HvClassMap {
    rect: Rect,
    east: Vec<u8>,
    north: Vec<u8>,
}

impl HvClassMap {
    pub fn build(hv: &[Highway]) -> Self {
        let mut rect = Rect::new(0, 0, -1, -1);
        for h in hv {
            let b = h.bbox();
            rect = if rect.is_empty() {
                b
            } else {
                Rect::new(rect.x0.min(b.x0), rect.y0.min(b.y0), rect.x1.max(b.x1), rect.y1.max(b.y1))
            };
        }
        let n = rect.area() as usize;
        let mut m = HvClassMap { rect, east: vec![0; n], north: vec![0; n] };
        for h in hv {
            let c = h.class.min(255) as u8;
            for b in h.bonds() {
                let i = m.rect.index(b.base);
                let slot = if b.dir == BondDir::E { &mut m.east[i] } else { &mut m.north[i] };
                *slot = (*slot).max(c);
            }
        }
        m
    }

    pub fn get(&self, b: Bond) -> u32 {
        if !self.rect.contains(b.base) {
            return 0;
        }
        let i = self.rect.index(b.base);
        match b.dir {
            BondDir::E => self.east[i] as u32,
            BondDir::N => self.north[i] as u32,
            _ => 0,
        }
    }
}
