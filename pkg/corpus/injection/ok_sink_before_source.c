int ok_sink_before_source() {
    int y = 1;
    exec(y);
    int x = input();
    return x;
}
