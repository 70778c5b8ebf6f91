int main()
{
    int x;
    int i = 0;
    while (1) {
        if (i >= 20) break;
        if (i * 2 > x + 10) break;
        i++;
    }
    return 0;
}
