use serde::Deserialize;

use super::{DiagramError, LinkDiagram, PdCode};

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonPd {
    Full(PdCode),
    Bare(Vec<[u32; 4]>),
}

/// Reads `PD[X(a,b,c,d), ...]` with an optional `+ Uk` suffix for `k` free
/// loops, or JSON: `{"crossings": [[a,b,c,d], ...], "free_loops": k}` or a
/// bare list of 4-tuples. `X[...]` brackets are accepted as well.
pub fn parse_pd(text: &str) -> Result<LinkDiagram, DiagramError> {
    let t = text.trim();
    if t.starts_with('{') || t.starts_with("[[") || t == "[]" {
        let pd = match serde_json::from_str::<JsonPd>(t) {
            Ok(JsonPd::Full(pd)) => pd,
            Ok(JsonPd::Bare(crossings)) => PdCode { crossings, free_loops: 0 },
            Err(e) => return Err(DiagramError::Syntax(e.to_string())),
        };
        return LinkDiagram::from_pd(&pd);
    }
    let compact: String = t.chars().filter(|c| !c.is_whitespace()).collect();
    let (body, loops) = match compact.rsplit_once("+U") {
        Some((b, k)) => {
            let k = k.parse::<u32>().map_err(|_| DiagramError::Syntax(format!("bad free-loop count {k:?}")))?;
            (b, k)
        }
        None => (compact.as_str(), 0),
    };
    let inner = body
        .strip_prefix("PD[")
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| DiagramError::Syntax(format!("expected PD[...], got {text:?}")))?;
    let mut crossings = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        rest = rest.strip_prefix(',').unwrap_or(rest);
        let after_x = rest
            .strip_prefix("X(")
            .map(|r| (r, ')'))
            .or_else(|| rest.strip_prefix("X[").map(|r| (r, ']')))
            .ok_or_else(|| DiagramError::Syntax(format!("expected X(...) at {rest:?}")))?;
        let (r, close) = after_x;
        let end = r.find(close).ok_or_else(|| DiagramError::Syntax("unclosed crossing".into()))?;
        let nums = r[..end]
            .split(',')
            .map(|n| n.parse::<u32>().map_err(|_| DiagramError::Syntax(format!("bad arc label {n:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let x: [u32; 4] = nums
            .try_into()
            .map_err(|v: Vec<u32>| DiagramError::Syntax(format!("crossing needs 4 labels, got {}", v.len())))?;
        crossings.push(x);
        rest = &r[end + 1..];
    }
    LinkDiagram::new(crossings, loops)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_and_json_agree() {
        let a = parse_pd("PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]").unwrap();
        let b = parse_pd("[[1,4,2,5],[3,6,4,1],[5,2,6,3]]").unwrap();
        let c = parse_pd(r#"{"crossings": [[1,4,2,5],[3,6,4,1],[5,2,6,3]], "free_loops": 0}"#).unwrap();
        let d = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]").unwrap();
        assert_eq!(a.to_pd(), b.to_pd());
        assert_eq!(a.to_pd(), c.to_pd());
        assert_eq!(a.to_pd(), d.to_pd());
    }

    #[test]
    fn free_loop_suffix() {
        let d = parse_pd("PD[X(1,4,2,3), X(3,2,4,1)] + U2").unwrap();
        assert_eq!(d.free_loops(), 2);
        assert_eq!(d.components(), 4);
        let j = parse_pd(r#"{"crossings": [], "free_loops": 3}"#).unwrap();
        assert_eq!(j.components(), 3);
    }

    #[test]
    fn syntax_errors() {
        for bad in ["PD[X(1,2,3)]", "PD[Y(1,2,3,4)]", "X(1,2,3,4)", "PD[X(1,2,3,a)]", "PD[] + Ux", "{\"crossings\": 5}"] {
            assert!(matches!(parse_pd(bad), Err(DiagramError::Syntax(_))), "{bad}");
        }
    }
}
