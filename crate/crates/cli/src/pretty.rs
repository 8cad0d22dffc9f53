use affect_core::log::{LogRecord, RecordBody};

fn clock(t_ms: u64) -> String {
    let s = t_ms / 1000;
    format!("{:>3}:{:02}:{:02}.{:03}", s / 3600, (s / 60) % 60, s % 60, t_ms % 1000)
}

/// One human-readable line per log record.
pub fn line(r: &LogRecord) -> String {
    let detail = match &r.body {
        RecordBody::Event(e) => match e.severity {
            Some(sev) => format!("#{} {} ({sev:?})", e.id, e.kind),
            None => format!("#{} {}", e.id, e.kind),
        },
        RecordBody::Appraisal(a) => format!(
            "#{} v={:+.3} a={:+.3}  mood v={:+.3} a={:+.3}",
            a.event_id, a.valence, a.arousal, a.mood.valence, a.mood.arousal
        ),
        RecordBody::Response(x) => format!("#{} {:?}", x.event_id, x.label),
        RecordBody::Directive(d) => {
            let mut s = format!("{:?} face={:?} for {} ms", d.reason, d.face, d.duration_ms);
            if let Some(aura) = &d.aura {
                s += &format!(" aura=({:.0}°, {:.2})", aura.hue, aura.intensity);
            }
            if let Some(cue) = d.sound {
                s += &format!(" sound={}", serde_json::to_value(cue).unwrap().as_str().unwrap_or("?"));
            }
            if let Some(b) = d.bubble {
                s += &format!(" bubble={b:?}");
            }
            s
        }
        RecordBody::Needs(n) => format!(
            "touch {:.3}  rest {:.3}  social {:.3}  hunger {:.3}",
            n.touch, n.rest, n.social, n.hunger
        ),
        RecordBody::Mood(m) => format!("day {} v={:+.3} a={:+.3}", m.day_index, m.valence, m.arousal),
        RecordBody::Temperament(t) => {
            let mut s = format!("{:?} v={:+.3} a={:+.3}", t.archetype, t.valence, t.arousal);
            if let Some(m) = t.initial_mood {
                s += &format!("  mood v={:+.3} a={:+.3}", m.valence, m.arousal);
            }
            s
        }
        RecordBody::DayBoundary(d) => format!("day {} begins", d.day_index),
    };
    format!("{}  {:<12} {}", clock(r.t_ms), r.body.type_name(), detail)
}
