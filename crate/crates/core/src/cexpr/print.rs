use super::CExpr;

/// Canonical FullForm: `h[a, b]`, `{...}` for lists, quoted strings.
pub fn print_fullform(e: &CExpr) -> String {
    let mut out = String::new();
    write(e, &mut out);
    out
}

fn write(e: &CExpr, out: &mut String) {
    match e {
        CExpr::Sym(s) => out.push_str(s),
        CExpr::Int(n) => out.push_str(&n.to_string()),
        CExpr::Real(r) => out.push_str(&r.to_string()),
        CExpr::Str(s) => {
            out.push('"');
            for c in s.chars() {
                match c {
                    '"' => out.push_str("\\\""),
                    '\\' => out.push_str("\\\\"),
                    '\n' => out.push_str("\\n"),
                    '\t' => out.push_str("\\t"),
                    '\r' => out.push_str("\\r"),
                    c => out.push(c),
                }
            }
            out.push('"');
        }
        CExpr::App(h, args) => {
            let list = h.as_sym() == Some("List");
            if list {
                out.push('{');
            } else {
                // a compound or numeric head needs no special casing: `f[x][y]`
                write(h, out);
                out.push('[');
            }
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write(a, out);
            }
            out.push(if list { '}' } else { ']' });
        }
    }
}
