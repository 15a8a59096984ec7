int inj_direct() {
    int x = input();
    exec(x);
    return 0;
}
