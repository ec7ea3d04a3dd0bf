use std::ffi::{CStr, CString};
use std::ptr;
use vortexkit_ffi::*;

fn last_error() -> String {
    let p = vk_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn integrand_round_trip() {
    unsafe {
        let mut f = ptr::null_mut();
        let s = CString::new("trunc:100").unwrap();
        assert_eq!(vk_integrand_new(s.as_ptr(), &mut f), VkStatus::Ok);
        let mut v = 0.0;
        assert_eq!(vk_vortex_energy(f, &mut v), VkStatus::Ok);
        assert!((v - (100f64.ln() + 1.5)).abs() < 1e-12);
        assert_eq!(vk_integrand_value(f, 2.0, &mut v), VkStatus::Ok);
        assert_eq!(v, 2.0);
        assert_eq!(vk_lambda(f, 2.0 * std::f64::consts::PI, 0.0, &mut v), VkStatus::Ok);
        assert_eq!(v, 0.0);
        vk_integrand_free(f);

        let j = CString::new(r#"{"family":"power","params":{"p":1.5}}"#).unwrap();
        assert_eq!(vk_integrand_new(j.as_ptr(), &mut f), VkStatus::Ok);
        assert_eq!(vk_vortex_energy(f, &mut v), VkStatus::Ok);
        assert!((v - 2.0 / (0.5 * 1.5)).abs() < 1e-12);
        vk_integrand_free(f);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut f = ptr::null_mut();
        let s = CString::new("power:2.5").unwrap();
        assert_eq!(vk_integrand_new(s.as_ptr(), &mut f), VkStatus::InvalidArgument);
        assert!(f.is_null());
        assert!(last_error().contains('p'));
        assert_eq!(vk_integrand_new(ptr::null(), &mut f), VkStatus::NullPointer);
        let mut v = 0.0;
        assert_eq!(vk_vortex_energy(ptr::null(), &mut v), VkStatus::NullPointer);
        let q = CString::new("quadratic").unwrap();
        assert_eq!(vk_integrand_new(q.as_ptr(), &mut f), VkStatus::Ok);
        assert_eq!(vk_vortex_energy(f, &mut v), VkStatus::Divergent);
        vk_integrand_free(f);
        vk_integrand_free(ptr::null_mut());
        vk_string_free(ptr::null_mut());
    }
}

#[test]
fn field_pipeline() {
    unsafe {
        let mut m = ptr::null_mut();
        assert_eq!(vk_mesh_disk(0.1, &mut m), VkStatus::Ok);
        let (mut nv, mut nt) = (0usize, 0usize);
        assert_eq!(vk_mesh_counts(m, &mut nv, &mut nt), VkStatus::Ok);
        assert!(nv > 100 && nt > nv);

        let mut u = ptr::null_mut();
        let centers = [0.0, 0.0];
        let degrees = [1i64];
        assert_eq!(vk_field_vortex(m, centers.as_ptr(), degrees.as_ptr(), 1, 0.0, &mut u), VkStatus::Ok);

        let mut f = ptr::null_mut();
        let s = CString::new("trunc:10").unwrap();
        assert_eq!(vk_integrand_new(s.as_ptr(), &mut f), VkStatus::Ok);
        let mut e0 = 0.0;
        assert_eq!(vk_field_energy(u, f, &mut e0), VkStatus::Ok);
        let (mut v, mut e1) = (ptr::null_mut(), 0.0);
        assert_eq!(vk_field_minimize(u, f, 200, &mut v, &mut e1), VkStatus::Ok);
        assert!(e1 <= e0);

        let mut js = ptr::null_mut();
        assert_eq!(vk_field_defects_json(v, &mut js), VkStatus::Ok);
        let text = CStr::from_ptr(js).to_str().unwrap().to_owned();
        vk_string_free(js);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["total_degree"], 1);

        vk_field_free(u);
        vk_field_free(v);
        vk_integrand_free(f);
        vk_mesh_free(m);
    }
}

#[test]
fn merge_sim_json() {
    unsafe {
        let seeds = CString::new(r#"[{"center":[0,0],"degree":1},{"center":[0.1,0],"degree":1}]"#).unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(vk_merge_sim(seeds.as_ptr(), 1.0, 2.0 * std::f64::consts::PI, &mut out), VkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(out).to_str().unwrap()).unwrap();
        vk_string_free(out);
        let r: f64 = v["balls_minus"].as_array().unwrap().iter().map(|b| b["radius"].as_f64().unwrap()).sum();
        assert!((r - 1.0).abs() < 1e-12);

        let dup = CString::new(r#"[{"center":[0,0],"degree":1},{"center":[0,0],"degree":1}]"#).unwrap();
        assert_eq!(vk_merge_sim(dup.as_ptr(), 1.0, 1.0, &mut out), VkStatus::InvalidArgument);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/vortexkit.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 14);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn header_compiles_as_c() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let tmp = tempfile_path();
    std::fs::write(&tmp, "#include \"vortexkit.h\"\nint main(void) { return vk_last_error() == 0 ? 0 : 1; }\n").unwrap();
    match std::process::Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-I", dir]).arg(&tmp).status() {
        Ok(s) => assert!(s.success(), "header failed to compile"),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
    let _ = std::fs::remove_file(tmp);
}

fn tempfile_path() -> std::path::PathBuf {
    std::env::temp_dir().join(format!("vortexkit_header_{}.c", std::process::id()))
}
