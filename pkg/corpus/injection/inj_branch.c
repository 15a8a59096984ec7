int inj_branch(int c) {
    int x = input();
    if (c) {
        exec(x);
    }
    return 0;
}
