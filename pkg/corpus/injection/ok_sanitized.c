int ok_sanitized() {
    int x = input();
    x = sanitize(x);
    exec(x);
    return 0;
}
