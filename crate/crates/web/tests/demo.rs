use cellcurv_web::{flow_rgba, operator_map, resample_rgba, synthetic};

#[test]
fn flat_image_renders_white() {
    let gray = vec![77; 12];
    for op in ["ricci", "box1", "bochner", "box2"] {
        let rgba = operator_map(&gray, 4, 3, op, "avg", 1.0).unwrap();
        assert_eq!(rgba.len(), 48);
        assert!(rgba.iter().all(|&b| b == 255));
    }
}

#[test]
fn step_lights_up_only_near_the_step() {
    let gray = synthetic("step", 16).unwrap();
    let rgba = operator_map(&gray, 16, 16, "ricci", "v", 1.0).unwrap();
    for (k, px) in rgba.chunks(4).enumerate() {
        let j = k % 16;
        if px != [255, 255, 255, 255] {
            assert!(j == 7 || j == 8, "column {j}");
        }
    }
    assert!(rgba.chunks(4).any(|px| px != [255, 255, 255, 255]));
}

#[test]
fn rejects_bad_arguments() {
    let gray = vec![0; 4];
    assert!(operator_map(&gray, 2, 2, "nope", "avg", 1.0).is_err());
    assert!(operator_map(&gray, 2, 2, "ricci", "diag", 1.0).is_err());
    assert!(operator_map(&gray, 3, 2, "ricci", "avg", 1.0).is_err());
    assert!(operator_map(&gray, 2, 2, "ricci", "avg", -1.0).is_err());
    assert!(resample_rgba(&gray, 2, 2, "up", 4).is_err());
    assert!(synthetic("plaid", 8).is_err());
}

#[test]
fn resample_reports_new_size() {
    let gray = synthetic("disc", 6).unwrap();
    let up = resample_rgba(&gray, 6, 6, "up", 3).unwrap();
    assert_eq!(&up[..8], &[18, 0, 0, 0, 18, 0, 0, 0]);
    assert_eq!(up.len(), 8 + 18 * 18 * 4);
    let down = resample_rgba(&gray, 6, 6, "down", 2).unwrap();
    assert_eq!(&down[..8], &[3, 0, 0, 0, 3, 0, 0, 0]);
}

#[test]
fn flow_frames_are_stacked() {
    let gray = synthetic("noise", 8).unwrap();
    let frames = flow_rgba(&gray, 8, 8, 4, 1e-3).unwrap();
    assert_eq!(frames.len(), 5 * 8 * 8 * 4);
    assert_eq!(synthetic("noise", 8).unwrap(), gray);
}
